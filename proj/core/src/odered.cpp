#include "ancient/odered.hpp"

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "ancient/error.hpp"
#include "ancient/exact.hpp"

namespace ancient::ode {

namespace {

using Vec3 = std::array<double, 3>;

// Relative size of the exponential part below which a profile counts as a cylinder.
constexpr double kCylinderTolerance = 1e-10;

}  // namespace

Derivative rhs(const OdeState& s) noexcept {
  return {4.0 * s.a * s.d, 4.0 * s.b * s.d, 16.0 * s.a * s.b};
}

const char* to_string(OdeStatus s) {
  switch (s) {
    case OdeStatus::Completed: return "completed";
    case OdeStatus::BlowUp: return "blow_up";
  }
  return "unknown";
}

const char* to_string(FitLabel label) {
  switch (label) {
    case FitLabel::Rosenau: return "Rosenau";
    case FitLabel::Cylinder: return "Cylinder";
    case FitLabel::NotInFamily: return "NotInFamily";
  }
  return "unknown";
}

Trajectory integrate(const OdeState& s0, double t1, const OdeTolerances& tol) {
  if (!(t1 > s0.t)) {
    std::ostringstream msg;
    msg << "t1 = " << t1 << " must lie after the initial time " << s0.t;
    throw invalid_argument(msg.str());
  }
  if (!std::isfinite(s0.a) || !std::isfinite(s0.b) || !std::isfinite(s0.d)) {
    throw invalid_argument("initial ODE state must be finite");
  }
  namespace odeint = boost::numeric::odeint;
  auto system = [](const Vec3& x, Vec3& dxdt, double) {
    const auto d = rhs({x[0], x[1], x[2], 0.0});
    dxdt = {d.da, d.db, d.dd};
  };
  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<Vec3>>(tol.atol, tol.rtol);

  Trajectory out;
  out.states.push_back(s0);
  Vec3 x{s0.a, s0.b, s0.d};
  double t = s0.t;
  double dt = std::min(1e-3, t1 - t);
  constexpr int kMaxRejects = 500;
  int rejects = 0;
  while (t < t1) {
    dt = std::min(dt, t1 - t);
    const double t_before = t;
    if (stepper.try_step(system, x, t, dt) == odeint::success) {
      rejects = 0;
      if (t1 - t < 1e-15 * std::fabs(t1)) t = t1;
      out.states.push_back({x[0], x[1], x[2], t});
      if (std::fabs(x[0]) > tol.blow_up || std::fabs(x[1]) > tol.blow_up || std::fabs(x[2]) > tol.blow_up ||
          !std::isfinite(x[0] + x[1] + x[2])) {
        std::ostringstream msg;
        msg << "coefficients exceeded " << tol.blow_up << " at t = " << t;
        out.status = OdeStatus::BlowUp;
        out.detail = msg.str();
        return out;
      }
    } else if (++rejects > kMaxRejects || t_before + dt == t_before) {
      std::ostringstream msg;
      msg << "step size collapsed at t = " << t;
      out.status = OdeStatus::BlowUp;
      out.detail = msg.str();
      return out;
    }
  }
  return out;
}

OdeState closed_form(double mu, double x0, double t) {
  if (!std::isfinite(x0)) throw invalid_argument("offset x0 must be finite");
  const auto c = exact::rosenau_coefficients(mu, t);
  const double lambda = std::exp(2.0 * x0);
  return {c.a_tilde / (2.0 * lambda), lambda * c.a_tilde / 2.0, c.d, t};
}

FitReport fit_rosenau(std::span<const double> x, std::span<const double> w) {
  if (x.size() != w.size()) throw invalid_argument("fit needs as many x samples as w samples");
  if (x.size() < 5) throw invalid_argument("fit needs at least 5 samples");
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0.0) || !std::isfinite(w[i]) || !std::isfinite(x[i])) {
      std::ostringstream msg;
      msg << "profile must be finite and strictly positive; sample " << i << " holds w = " << w[i];
      throw invalid_argument(msg.str());
    }
  }
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd M(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double xi = x[static_cast<std::size_t>(i)];
    M(i, 0) = std::exp(2.0 * xi);
    M(i, 1) = std::exp(-2.0 * xi);
    M(i, 2) = 1.0;
    y(i) = w[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector3d scale = M.cwiseAbs().colwise().maxCoeff().transpose();
  const Eigen::MatrixXd Ms = M * scale.cwiseInverse().asDiagonal();
  const Eigen::Vector3d coef = Ms.colPivHouseholderQr().solve(y).cwiseQuotient(scale);

  FitReport rep;
  rep.a = coef(0);
  rep.b = coef(1);
  rep.d = coef(2);
  rep.residual = (M * coef - y).cwiseAbs().maxCoeff();
  rep.conserved = rep.d * rep.d - 4.0 * rep.a * rep.b;
  rep.x0 = std::numeric_limits<double>::quiet_NaN();

  const double exp_part = (M.leftCols(2) * coef.head(2)).cwiseAbs().maxCoeff();
  if (exp_part <= kCylinderTolerance * std::fabs(rep.d) && rep.d > 0.0) {
    rep.label = FitLabel::Cylinder;
    rep.mu = rep.d;
    return rep;
  }
  if (!(rep.a > 0.0) || !(rep.b > 0.0) || !(rep.conserved > 0.0)) {
    rep.label = FitLabel::NotInFamily;
    rep.mu = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  rep.label = FitLabel::Rosenau;
  rep.mu = std::sqrt(rep.conserved);
  rep.x0 = 0.25 * std::log(rep.b / rep.a);
  return rep;
}

}  // namespace ancient::ode
