#include "ancient/exact.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ancient/error.hpp"
#include "ancient/hyperbolic.hpp"

namespace ancient::exact {

namespace {

void require_past(double t) {
  if (!(t < 0.0)) {
    throw invalid_argument("ancient solutions are defined for t < 0 only (got t = " +
                           std::to_string(t) + "; extinct at t = 0)");
  }
}

void require_mu(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw invalid_argument("Rosenau parameter mu must be positive (got " + std::to_string(mu) + ")");
  }
}

// Rosenau in the sphere gauge, written as
//   v = D cos^2 psi + A (ch (1 + s^2) - 2 sh s),  s = sin psi,
// with ch = cosh(2 x0), sh = sinh(2 x0). Both terms are non-negative.
struct RosenauSlice {
  double A, D, ch, sh;

  RosenauSlice(double mu, double x0, double t) {
    const auto c = rosenau_coefficients(mu, t);
    A = c.a_tilde;
    D = c.d;
    ch = std::cosh(2.0 * x0);
    sh = std::sinh(2.0 * x0);
  }

  double tip(double s) const { return ch * (1.0 + s * s) - 2.0 * sh * s; }

  double v(double s, double c2) const { return D * c2 + A * tip(s); }
  double v_t(double s, double c2) const { return 4.0 * A * A * c2 + 4.0 * A * D * tip(s); }

  // v = P + Q s^2 + L s in the polynomial form used for psi-derivatives.
  double Q() const { return A * ch - D; }
  double L() const { return -2.0 * A * sh; }
};

}  // namespace

RosenauCoefficients rosenau_coefficients(double mu, double t) {
  require_mu(mu);
  require_past(t);
  const double z = 4.0 * mu * t;
  return {-mu * hyp::csch(z), -mu * hyp::coth(z)};
}

AncientSolution AncientSolution::contracting_sphere() { return {Kind::ContractingSphere, 0.0, 0.0}; }

AncientSolution AncientSolution::rosenau(double mu, double x0) {
  require_mu(mu);
  if (!std::isfinite(x0)) throw invalid_argument("Rosenau offset x0 must be finite");
  return {Kind::Rosenau, mu, x0};
}

double AncientSolution::v(double psi, double t) const {
  require_past(t);
  if (kind_ == Kind::ContractingSphere) return sphere_v(t);
  const double s = std::sin(psi);
  const double c = std::cos(psi);
  return RosenauSlice(mu_, x0_, t).v(s, c * c);
}

double AncientSolution::v_t(double psi, double t) const {
  require_past(t);
  if (kind_ == Kind::ContractingSphere) return 1.0 / (2.0 * t * t);
  const double s = std::sin(psi);
  const double c = std::cos(psi);
  return RosenauSlice(mu_, x0_, t).v_t(s, c * c);
}

double AncientSolution::v_psi(double psi, double t) const {
  require_past(t);
  if (kind_ == Kind::ContractingSphere) return 0.0;
  const RosenauSlice r(mu_, x0_, t);
  return r.Q() * std::sin(2.0 * psi) + r.L() * std::cos(psi);
}

double AncientSolution::v_psipsi(double psi, double t) const {
  require_past(t);
  if (kind_ == Kind::ContractingSphere) return 0.0;
  const RosenauSlice r(mu_, x0_, t);
  return 2.0 * r.Q() * std::cos(2.0 * psi) - r.L() * std::sin(psi);
}

double AncientSolution::v_psipsipsi(double psi, double t) const {
  require_past(t);
  if (kind_ == Kind::ContractingSphere) return 0.0;
  const RosenauSlice r(mu_, x0_, t);
  return -4.0 * r.Q() * std::sin(2.0 * psi) - r.L() * std::cos(psi);
}

double AncientSolution::R(double psi, double t) const {
  require_past(t);
  if (kind_ == Kind::ContractingSphere) return -1.0 / t;
  const double s = std::sin(psi);
  const double c = std::cos(psi);
  const RosenauSlice r(mu_, x0_, t);
  return r.v_t(s, c * c) / r.v(s, c * c);
}

double AncientSolution::w(double x, double t) const {
  require_past(t);
  if (kind_ == Kind::ContractingSphere) {
    const double ch = std::cosh(x);
    return sphere_v(t) * ch * ch;
  }
  const auto c = rosenau_coefficients(mu_, t);
  return c.a_tilde * std::cosh(2.0 * (x - x0_)) + c.d;
}

double AncientSolution::w_t(double x, double t) const {
  require_past(t);
  if (kind_ == Kind::ContractingSphere) {
    const double ch = std::cosh(x);
    return ch * ch / (2.0 * t * t);
  }
  const auto c = rosenau_coefficients(mu_, t);
  return 4.0 * c.a_tilde * c.d * std::cosh(2.0 * (x - x0_)) + 4.0 * c.a_tilde * c.a_tilde;
}

GaugeTriple AncientSolution::gauges(double x, double t) const {
  GaugeTriple g{};
  g.x = x;
  g.psi = grid::gudermannian(x);
  g.w = w(x, t);
  const double sech = hyp::sech(x);
  g.v = g.w * sech * sech;
  g.u = 1.0 / g.v;
  g.U = 1.0 / g.w;
  return g;
}

std::vector<double> AncientSolution::sample_v(const grid::PsiGrid& g, double t) const {
  require_past(t);
  std::vector<double> out(static_cast<std::size_t>(g.size()));
  const auto s = g.sin_psi();
  const auto c = g.cos_psi();
  if (kind_ == Kind::ContractingSphere) {
    std::fill(out.begin(), out.end(), sphere_v(t));
    return out;
  }
  const RosenauSlice r(mu_, x0_, t);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = r.v(s[j], c[j] * c[j]);
  return out;
}

std::vector<double> AncientSolution::sample_R(const grid::PsiGrid& g, double t) const {
  require_past(t);
  std::vector<double> out(static_cast<std::size_t>(g.size()));
  if (kind_ == Kind::ContractingSphere) {
    std::fill(out.begin(), out.end(), -1.0 / t);
    return out;
  }
  const auto s = g.sin_psi();
  const auto c = g.cos_psi();
  const RosenauSlice r(mu_, x0_, t);
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double c2 = c[j] * c[j];
    out[j] = r.v_t(s[j], c2) / r.v(s[j], c2);
  }
  return out;
}

std::vector<double> AncientSolution::sample_w(const grid::CylinderWindow& window, double t) const {
  std::vector<double> out(static_cast<std::size_t>(window.n));
  for (int i = 0; i < window.n; ++i) out[static_cast<std::size_t>(i)] = w(window.node(i), t);
  return out;
}

double AncientSolution::max_R(double t) const {
  require_past(t);
  if (kind_ == Kind::ContractingSphere) return -1.0 / t;
  // At either pole (s = +-1, cos psi = 0) R = v_t / v = 4 D.
  return 4.0 * rosenau_coefficients(mu_, t).d;
}

double sphere_v(double t) {
  require_past(t);
  return 1.0 / (2.0 * (-t));
}

double rosenau_v(double psi, double t, double mu) { return AncientSolution::rosenau(mu).v(psi, t); }

double rosenau_w(double x, double t, double mu, double x0) {
  return AncientSolution::rosenau(mu, x0).w(x, t);
}

double rosenau_R(double psi, double t, double mu) { return AncientSolution::rosenau(mu).R(psi, t); }

double BackwardLimit::v(double psi) const {
  const double c = std::cos(psi);
  return C * c * c;
}

double BackwardLimit::v_psi(double psi) const { return -C * std::sin(2.0 * psi); }

double BackwardLimit::v_psipsi(double psi) const { return -2.0 * C * std::cos(2.0 * psi); }

double BackwardLimit::steady_residual(double psi) const {
  const double f = v(psi);
  const double fp = v_psi(psi);
  const double lap = v_psipsi(psi) - std::tan(psi) * fp;
  return f * lap - fp * fp + 2.0 * f * f;
}

std::vector<double> BackwardLimit::sample(const grid::PsiGrid& g) const {
  std::vector<double> out(static_cast<std::size_t>(g.size()));
  const auto c = g.cos_psi();
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = C * c[j] * c[j];
  return out;
}

BackwardLimit backward_limit(const AncientSolution& sol) {
  return {sol.kind() == Kind::ContractingSphere ? 0.0 : sol.mu()};
}

double type_ratio(const AncientSolution& sol, double t) {
  require_past(t);
  // |t| * (1/|t|) simplifies to exactly one for the sphere.
  if (sol.kind() == Kind::ContractingSphere) return 1.0;
  return -t * sol.max_R(t);
}

}  // namespace ancient::exact
