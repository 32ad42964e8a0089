#include "ancient/diagnostics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>

#include "ancient/error.hpp"
#include "ancient/hyperbolic.hpp"

namespace ancient::diagnostics {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kRadialTolerance = 1e-12;

void require_positive(std::span<const double> v, const char* what) {
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (!(v[j] > 0.0) || !std::isfinite(v[j])) {
      std::ostringstream msg;
      msg << what << " must be positive and finite; node " << j << " holds " << v[j];
      throw invalid_argument(msg.str());
    }
  }
}

// Componentwise pieces of a 2-D field that most quantities need.
struct Gradient2D {
  grid::Field2D psi, theta, lap;
};

Gradient2D gradient2d(const grid::Field2D& f, const grid::PsiGrid& pg, const grid::ThetaGrid& tg) {
  return {grid::d_dpsi(f, pg, 1), grid::d_dtheta(f, tg, 1), grid::laplacian_full(f, pg, tg)};
}

double sec2(const grid::PsiGrid& g, int j) {
  const double c = g.cos_psi()[static_cast<std::size_t>(j)];
  return 1.0 / (c * c);
}

template <class F>
grid::Field2D map2d(const grid::Field2D& shape, F&& f) {
  grid::Field2D out(shape.rows(), shape.cols());
  for (int j = 0; j < shape.rows(); ++j) {
    for (int k = 0; k < shape.cols(); ++k) out(j, k) = f(j, k);
  }
  return out;
}

bool is_radial(const grid::Field2D& v) { return flow2d::theta_variation(v) <= kRadialTolerance; }

flow1d::RadialState column_state(const SphereState2D& s) {
  std::vector<double> v(static_cast<std::size_t>(s.v.rows()));
  for (int j = 0; j < s.v.rows(); ++j) v[static_cast<std::size_t>(j)] = s.v(j, 0);
  return {s.psi_grid, std::move(v), s.t};
}

}  // namespace

std::vector<double> scalar_curvature(const grid::PsiGrid& g, std::span<const double> v) {
  require_positive(v, "pressure");
  const auto vp = grid::d_dpsi(v, g, 1);
  auto R = grid::laplacian_radial(v, g);
  for (std::size_t j = 0; j < R.size(); ++j) R[j] += -vp[j] * vp[j] / v[j] + 2.0 * v[j];
  return R;
}

std::vector<double> scalar_curvature(const RadialState& s) { return scalar_curvature(s.grid, s.v); }

grid::Field2D scalar_curvature(const SphereState2D& s) {
  require_positive(s.v.values(), "pressure");
  const auto d = gradient2d(s.v, s.psi_grid, s.theta_grid);
  return map2d(s.v, [&](int j, int k) {
    const double v = s.v(j, k);
    const double grad2 = d.psi(j, k) * d.psi(j, k) + sec2(s.psi_grid, j) * d.theta(j, k) * d.theta(j, k);
    return d.lap(j, k) - grad2 / v + 2.0 * v;
  });
}

std::vector<double> temporal_curvature(std::span<const double> v_prev, std::span<const double> v_mid,
                                       std::span<const double> v_next, double delta) {
  if (v_prev.size() != v_mid.size() || v_next.size() != v_mid.size()) {
    throw invalid_argument("temporal curvature needs three fields of equal size");
  }
  if (!(delta > 0.0)) throw invalid_argument("temporal curvature needs delta > 0");
  require_positive(v_mid, "pressure");
  std::vector<double> R(v_mid.size());
  for (std::size_t j = 0; j < R.size(); ++j) R[j] = (v_next[j] - v_prev[j]) / (2.0 * delta * v_mid[j]);
  return R;
}

double area(const RadialState& s) {
  require_positive(s.v, "pressure");
  std::vector<double> u(s.v.size());
  std::transform(s.v.begin(), s.v.end(), u.begin(), [](double v) { return 1.0 / v; });
  return grid::integrate_sphere(u, s.grid);
}

double area(const SphereState2D& s) {
  require_positive(s.v.values(), "pressure");
  const auto u = map2d(s.v, [&](int j, int k) { return 1.0 / s.v(j, k); });
  return grid::integrate_sphere(u, s.psi_grid, s.theta_grid);
}

double total_curvature(const RadialState& s) {
  auto R = scalar_curvature(s);
  for (std::size_t j = 0; j < R.size(); ++j) R[j] /= s.v[j];
  return grid::integrate_sphere(R, s.grid);
}

double total_curvature(const SphereState2D& s) {
  auto R = scalar_curvature(s);
  for (std::size_t i = 0; i < R.values().size(); ++i) R.values()[i] /= s.v.values()[i];
  return grid::integrate_sphere(R, s.psi_grid, s.theta_grid);
}

double lyapunov_J(const RadialState& s) {
  require_positive(s.v, "pressure");
  const auto vp = grid::d_dpsi(s.v, s.grid, 1);
  std::vector<double> f(s.v.size());
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = vp[j] * vp[j] / s.v[j] - 4.0 * s.v[j];
  return grid::integrate_sphere(f, s.grid);
}

double lyapunov_J(const SphereState2D& s) {
  require_positive(s.v.values(), "pressure");
  const auto d = gradient2d(s.v, s.psi_grid, s.theta_grid);
  const auto f = map2d(s.v, [&](int j, int k) {
    const double grad2 = d.psi(j, k) * d.psi(j, k) + sec2(s.psi_grid, j) * d.theta(j, k) * d.theta(j, k);
    return grad2 / s.v(j, k) - 4.0 * s.v(j, k);
  });
  return grid::integrate_sphere(f, s.psi_grid, s.theta_grid);
}

LyapunovTerms lyapunov_terms(const RadialState& s) {
  const auto vt = flow1d::rhs(s);
  const auto vp = grid::d_dpsi(s.v, s.grid, 1);
  std::vector<double> diss(s.v.size()), grad(s.v.size());
  for (std::size_t j = 0; j < diss.size(); ++j) {
    const double v2 = s.v[j] * s.v[j];
    diss[j] = vt[j] * vt[j] / v2;
    grad[j] = vp[j] * vp[j] * vt[j] / v2;
  }
  return {-2.0 * grid::integrate_sphere(diss, s.grid), -grid::integrate_sphere(grad, s.grid)};
}

double lyapunov_rate(const RadialState& s) {
  const auto terms = lyapunov_terms(s);
  return terms.dissipation + terms.gradient;
}

double lyapunov_rate(const SphereState2D& s) {
  const auto vt = flow2d::rhs2d(s);
  const auto d = gradient2d(s.v, s.psi_grid, s.theta_grid);
  const auto f = map2d(s.v, [&](int j, int k) {
    const double v2 = s.v(j, k) * s.v(j, k);
    const double grad2 = d.psi(j, k) * d.psi(j, k) + sec2(s.psi_grid, j) * d.theta(j, k) * d.theta(j, k);
    return -2.0 * vt(j, k) * vt(j, k) / v2 - grad2 * vt(j, k) / v2;
  });
  return grid::integrate_sphere(f, s.psi_grid, s.theta_grid);
}

double harnack_residual(const grid::PsiGrid& g, std::span<const double> v, std::span<const double> R) {
  require_positive(v, "pressure");
  require_positive(R, "scalar curvature (Harnack form)");
  const auto lap = grid::laplacian_radial(R, g);
  const auto Rp = grid::d_dpsi(R, g, 1);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < v.size(); ++j) {
    worst = std::min(worst, lap[j] + R[j] * R[j] / v[j] - Rp[j] * Rp[j] / R[j]);
  }
  return worst;
}

double harnack_residual(const RadialState& s) {
  const auto R = scalar_curvature(s);
  return harnack_residual(s.grid, s.v, R);
}

double harnack_residual(const SphereState2D& s) {
  const auto R = scalar_curvature(s);
  require_positive(R.values(), "scalar curvature (Harnack form)");
  const auto d = gradient2d(R, s.psi_grid, s.theta_grid);
  double worst = std::numeric_limits<double>::infinity();
  for (int j = 0; j < R.rows(); ++j) {
    for (int k = 0; k < R.cols(); ++k) {
      const double r = R(j, k);
      const double grad2 = d.psi(j, k) * d.psi(j, k) + sec2(s.psi_grid, j) * d.theta(j, k) * d.theta(j, k);
      worst = std::min(worst, d.lap(j, k) + r * r / s.v(j, k) - grad2 / r);
    }
  }
  return worst;
}

std::vector<double> F_quantity(const RadialState& s) {
  flow1d::validate(s);
  const auto v1 = grid::d_dpsi(s.v, s.grid, 1);
  const auto v2 = grid::d_dpsi(s.v, s.grid, 2);
  const auto v3 = grid::d_dpsi(s.v, s.grid, 3);
  const auto c = s.grid.cos_psi();
  const auto sn = s.grid.sin_psi();
  const auto tn = s.grid.tan_psi();
  std::vector<double> F(s.v.size());
  for (std::size_t j = 0; j < F.size(); ++j) {
    const double G = (-c[j] + 2.0 / c[j] + sn[j] * tn[j]) * v1[j] + 3.0 * sn[j] * v2[j] + c[j] * v3[j];
    F[j] = G * G;
  }
  return F;
}

double sup_F(const RadialState& s) {
  const auto F = F_quantity(s);
  return *std::max_element(F.begin(), F.end());
}

double sup_F(const SphereState2D& s) {
  flow2d::validate(s);
  if (!is_radial(s.v)) {
    throw invalid_argument("F is defined for radial states only; theta-variation is " +
                           std::to_string(flow2d::theta_variation(s.v)));
  }
  return sup_F(column_state(s));
}

double grad_bound(const RadialState& s) {
  require_positive(s.v, "pressure");
  const auto vp = grid::d_dpsi(s.v, s.grid, 1);
  const auto lap = grid::laplacian_radial(s.v, s.grid);
  double best = 0.0;
  for (std::size_t j = 0; j < vp.size(); ++j) {
    best = std::max(best, std::fabs(lap[j]) + vp[j] * vp[j] / s.v[j]);
  }
  return best;
}

double grad_bound(const SphereState2D& s) {
  require_positive(s.v.values(), "pressure");
  const auto d = gradient2d(s.v, s.psi_grid, s.theta_grid);
  double best = 0.0;
  for (int j = 0; j < s.v.rows(); ++j) {
    for (int k = 0; k < s.v.cols(); ++k) {
      const double grad2 = d.psi(j, k) * d.psi(j, k) + sec2(s.psi_grid, j) * d.theta(j, k) * d.theta(j, k);
      best = std::max(best, std::fabs(d.lap(j, k)) + grad2 / s.v(j, k));
    }
  }
  return best;
}

double theta_mass(const SphereState2D& s) {
  require_positive(s.v.values(), "pressure");
  const auto u = map2d(s.v, [&](int j, int k) { return 1.0 / s.v(j, k); });
  auto ut = grid::d_dtheta(u, s.theta_grid, 1);
  for (double& x : ut.values()) x = std::fabs(x);
  return grid::integrate_sphere(ut, s.psi_grid, s.theta_grid);
}

double cap_curvature(const exact::AncientSolution& sol, double psi0, double t, Cap cap) {
  if (sol.kind() != exact::Kind::Rosenau) {
    throw invalid_argument("cap_curvature needs a Rosenau solution");
  }
  if (!(psi0 < std::numbers::pi / 2) || std::isnan(psi0)) {
    throw invalid_argument("cap boundary psi0 must lie below the north pole");
  }
  const auto c = exact::rosenau_coefficients(sol.mu(), t);
  const double A = c.a_tilde;
  const double D = c.d;
  const double reach = 2.0 * sol.mu() * (-t) + 20.0;
  const double x0 = sol.x0();

  // R U in the cylinder gauge: w_t / w^2 = 4 A (D s + A s^2) / (A + D s)^2, s = sech(2 (x - x0)).
  auto density = [&](double x) {
    const double s = hyp::sech(2.0 * (x - x0));
    const double den = A + D * s;
    return 2.0 * std::numbers::pi * 4.0 * A * (D * s + A * s * s) / (den * den);
  };

  // North cap psi > psi0 is x > x(psi0); the south cap mirrors it about x = 0.
  const double edge = psi0 <= -std::numbers::pi / 2 ? -std::numeric_limits<double>::infinity()
                                                    : grid::inverse_gudermannian(psi0);
  double lo, hi;
  if (cap == Cap::North) {
    lo = std::max(edge, x0 - reach);
    hi = x0 + reach;
  } else {
    lo = x0 - reach;
    hi = std::min(-edge, x0 + reach);
  }
  if (!(hi > lo)) return 0.0;

  // Beyond the window the density decays like exp(-2 |x - x0|), so each
  // neglected tail holds about density / 2.
  const double tail_lo = (cap == Cap::South || lo > edge) ? density(lo) / 2.0 : 0.0;
  const double tail_hi = (cap == Cap::North || hi < -edge) ? density(hi) / 2.0 : 0.0;
  if (tail_lo > 1e-8 || tail_hi > 1e-8) {
    std::ostringstream msg;
    msg << "cap window [" << lo << ", " << hi << "] under-resolved: boundary tail mass "
        << std::max(tail_lo, tail_hi) << " exceeds 1e-8";
    throw Error("under_resolved", msg.str());
  }

  // Split at the tips so the adaptive rule sees each concentration region.
  std::vector<double> cuts{lo};
  for (double tip : {x0 - 2.0 * sol.mu() * (-t), x0, x0 + 2.0 * sol.mu() * (-t)}) {
    if (tip > cuts.back() && tip < hi) cuts.push_back(tip);
  }
  cuts.push_back(hi);
  using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += Rule::integrate(density, cuts[i], cuts[i + 1], 20, 1e-14);
  }
  return total;
}

DiagnosticsRecord make_record(const RadialState& s, const RecordOptions& opts) {
  flow1d::validate(s);
  DiagnosticsRecord r;
  r.t = s.t;
  r.area = area(s);
  r.d_area_dt = kNaN;
  r.dJ_dt_measured = kNaN;
  const auto R = scalar_curvature(s);
  std::vector<double> Ru(R.size());
  for (std::size_t j = 0; j < R.size(); ++j) Ru[j] = R[j] / s.v[j];
  r.total_curvature = grid::integrate_sphere(Ru, s.grid);
  const auto [lo, hi] = std::minmax_element(R.begin(), R.end());
  r.R_min = *lo;
  r.R_max = *hi;
  r.type_ratio = std::fabs(s.t) * r.R_max;
  r.J = lyapunov_J(s);
  r.dJ_dt_formula = lyapunov_rate(s);
  r.harnack_min = (opts.harnack && r.R_min > 0.0) ? harnack_residual(s.grid, s.v, R) : kNaN;
  r.grad_bound = grad_bound(s);
  r.sup_F = opts.F ? sup_F(s) : kNaN;
  r.theta_mass = 0.0;
  if (opts.iso) r.iso = iso::iso_ratio(s.grid, s.v);
  return r;
}

DiagnosticsRecord make_record(const SphereState2D& s, const RecordOptions& opts) {
  flow2d::validate(s);
  DiagnosticsRecord r;
  r.t = s.t;
  r.area = area(s);
  r.d_area_dt = kNaN;
  r.dJ_dt_measured = kNaN;
  const auto R = scalar_curvature(s);
  auto Ru = R;
  for (std::size_t i = 0; i < Ru.values().size(); ++i) Ru.values()[i] /= s.v.values()[i];
  r.total_curvature = grid::integrate_sphere(Ru, s.psi_grid, s.theta_grid);
  const auto [lo, hi] = std::minmax_element(R.values().begin(), R.values().end());
  r.R_min = *lo;
  r.R_max = *hi;
  r.type_ratio = std::fabs(s.t) * r.R_max;
  r.J = lyapunov_J(s);
  r.dJ_dt_formula = lyapunov_rate(s);
  r.harnack_min = (opts.harnack && r.R_min > 0.0) ? harnack_residual(s) : kNaN;
  r.grad_bound = grad_bound(s);
  const bool radial = is_radial(s.v);
  r.sup_F = (opts.F && radial) ? sup_F(column_state(s)) : kNaN;
  r.theta_mass = theta_mass(s);
  if (opts.iso && radial) {
    const auto col = column_state(s);
    r.iso = iso::iso_ratio(col.grid, col.v);
  }
  return r;
}

namespace {

// First-derivative weights at z for arbitrary nodes (Fornberg).
std::vector<double> first_derivative_weights(double z, std::span<const double> x) {
  const std::size_t m = x.size();
  std::vector<double> c0(m, 0.0), c1(m, 0.0);
  double c1p = 1.0, c4 = x[0] - z;
  c0[0] = 1.0;
  for (std::size_t i = 1; i < m; ++i) {
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        c1[i] = c1p * (c0[i - 1] - c5 * c1[i - 1]) / c2;
        c0[i] = -c1p * c5 * c0[i - 1] / c2;
      }
      c1[j] = (c4 * c1[j] - c0[j]) / c3;
      c0[j] = c4 * c0[j] / c3;
    }
    c1p = c2;
  }
  return c1;
}

}  // namespace

void fill_rates(std::vector<DiagnosticsRecord>& records) {
  const std::size_t n = records.size();
  if (n < 2) return;
  const std::size_t width = std::min<std::size_t>(n, 5);
  std::vector<double> dA(n), dJ(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = std::min(i > width / 2 ? i - width / 2 : 0, n - width);
    std::vector<double> t(width);
    for (std::size_t k = 0; k < width; ++k) t[k] = records[lo + k].t;
    const auto w = first_derivative_weights(records[i].t, t);
    dA[i] = dJ[i] = 0.0;
    for (std::size_t k = 0; k < width; ++k) {
      dA[i] += w[k] * records[lo + k].area;
      dJ[i] += w[k] * records[lo + k].J;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    records[i].d_area_dt = dA[i];
    records[i].dJ_dt_measured = dJ[i];
  }
}

std::vector<std::string> csv_columns(bool with_iso) {
  std::vector<std::string> cols{"t",         "area",       "d_area_dt",   "total_curvature",
                                "R_min",     "R_max",      "type_ratio",  "J",
                                "dJ_dt_measured", "dJ_dt_formula", "harnack_min", "grad_bound",
                                "sup_F",     "theta_mass"};
  if (with_iso) {
    for (const char* c : {"psi_star", "L", "A1", "A2", "I", "kappa", "stat_residual"}) cols.emplace_back(c);
  }
  return cols;
}

std::vector<double> csv_values(const DiagnosticsRecord& r, bool with_iso) {
  std::vector<double> row{r.t,     r.area,       r.d_area_dt,      r.total_curvature, r.R_min,
                          r.R_max, r.type_ratio, r.J,              r.dJ_dt_measured,  r.dJ_dt_formula,
                          r.harnack_min, r.grad_bound, r.sup_F,    r.theta_mass};
  if (with_iso) {
    if (r.iso) {
      const auto& i = *r.iso;
      row.insert(row.end(), {i.psi_star, i.L, i.A1, i.A2, i.I, i.kappa, i.stationarity_residual});
    } else {
      row.insert(row.end(), 7, kNaN);
    }
  }
  return row;
}

}  // namespace ancient::diagnostics
