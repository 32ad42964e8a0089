#include "ancient/isoperimetric.hpp"

#include <fftw3.h>

#include <boost/math/special_functions/chebyshev.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ancient/error.hpp"
#include "fftw_planner.hpp"

namespace ancient::iso {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr double kTieRange = 1e-9;

void require_positive(std::span<const double> v) {
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (!(v[j] > 0.0) || !std::isfinite(v[j])) {
      std::ostringstream msg;
      msg << "metric factor must be positive and finite; node " << j << " holds " << v[j];
      throw invalid_argument(msg.str());
    }
  }
}

double ratio_of(double L, double A1, double A2) { return L * L * (1.0 / A1 + 1.0 / A2) / kFourPi; }

// Chebyshev series c0/2 + sum c_m T_m(s) of 1/v in s = sin psi. The latitude
// nodes map to first-kind Chebyshev points in reverse order, so the
// coefficients are a DCT-II of the samples.
struct Interpolant {
  std::vector<double> f, F, df;  // 1/v, its antiderivative (zero at s = -1), d/ds
  double total = 0.0;            // 2 pi F(1)

  explicit Interpolant(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<double> in(n), out(n);
    for (std::size_t k = 0; k < n; ++k) in[k] = 1.0 / v[n - 1 - k];
    fftw_plan plan;
    {
      std::lock_guard lock(detail::fftw_planner_mutex());
      plan = fftw_plan_r2r_1d(static_cast<int>(n), in.data(), out.data(), FFTW_REDFT10, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
      std::lock_guard lock(detail::fftw_planner_mutex());
      fftw_destroy_plan(plan);
    }
    f.resize(n);
    for (std::size_t m = 0; m < n; ++m) f[m] = out[m] / static_cast<double>(n);

    F.assign(n + 1, 0.0);
    auto coef = [&](std::size_t m) { return m < n ? f[m] : 0.0; };
    for (std::size_t k = 1; k <= n; ++k) F[k] = (coef(k - 1) - coef(k + 1)) / (2.0 * static_cast<double>(k));
    double at_minus_one = 0.0;
    for (std::size_t k = 1; k <= n; ++k) at_minus_one += (k % 2 ? -F[k] : F[k]);
    F[0] = -2.0 * at_minus_one;

    df.assign(n, 0.0);
    if (n >= 2) {
      df[n - 2] = 2.0 * static_cast<double>(n - 1) * f[n - 1];
      for (std::size_t j = n - 2; j >= 1; --j) {
        df[j - 1] = (j + 1 < n ? df[j + 1] : 0.0) + 2.0 * static_cast<double>(j) * f[j];
      }
    }
    total = kTwoPi * eval(F, 1.0);
  }

  static double eval(const std::vector<double>& c, double s) {
    return boost::math::chebyshev_clenshaw_recurrence(c.data(), c.size(), s);
  }

  double A1(double s) const { return kTwoPi * eval(F, s); }
  double A2(double s) const { return kTwoPi * (eval(F, 1.0) - eval(F, s)); }

  double L(double psi) const { return kTwoPi * std::cos(psi) * std::sqrt(eval(f, std::sin(psi))); }

  double kappa(double psi) const {
    const double s = std::sin(psi);
    const double fv = eval(f, s);
    const double fs = eval(df, s);
    return (-std::tan(psi) + std::cos(psi) * fs / (2.0 * fv)) / std::sqrt(fv);
  }

  double ratio(double psi) const {
    const double s = std::sin(psi);
    return ratio_of(L(psi), A1(s), A2(s));
  }
};

IsoResult evaluate(const Interpolant& p, double psi) {
  IsoResult r;
  r.psi_star = psi;
  const double s = std::sin(psi);
  r.L = p.L(psi);
  r.A1 = p.A1(s);
  r.A2 = p.A2(s);
  r.I = ratio_of(r.L, r.A1, r.A2);
  r.kappa = p.kappa(psi);
  r.stationarity_residual = std::fabs(2.0 * r.kappa - r.L * (1.0 / r.A1 - 1.0 / r.A2));
  return r;
}

// Vertex offset (in units of the spacing) of the parabola through three
// equally spaced values, clamped to the bracket.
double parabola_offset(double fm, double f0, double fp) {
  const double curvature = fm - 2.0 * f0 + fp;
  if (!(curvature > 0.0)) return 0.0;
  return std::clamp(0.5 * (fm - fp) / curvature, -1.0, 1.0);
}

std::vector<double> derivative_uniform(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 2 && i + 2 < n) {
      d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    } else if (i == 0) {
      d[i] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    } else if (i + 1 == n) {
      d[i] = (3.0 * f[i] - 4.0 * f[i - 1] + f[i - 2]) / (2.0 * h);
    } else {
      d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    }
  }
  return d;
}

}  // namespace

LatitudeProfile latitude_profile(const grid::PsiGrid& g, std::span<const double> v) {
  if (static_cast<int>(v.size()) != g.size()) throw invalid_argument("profile size does not match grid");
  require_positive(v);
  const Interpolant p(v);
  LatitudeProfile out;
  out.total_area = p.total;
  const auto c = g.cos_psi();
  const auto s = g.sin_psi();
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double L = kTwoPi * c[j] / std::sqrt(v[j]);
    const double A1 = p.A1(s[j]);
    const double A2 = p.A2(s[j]);
    out.psi.push_back(g.node(static_cast<int>(j)));
    out.L.push_back(L);
    out.A1.push_back(A1);
    out.A2.push_back(A2);
    out.ratio.push_back(ratio_of(L, A1, A2));
  }
  return out;
}

IsoResult iso_ratio(const grid::PsiGrid& g, std::span<const double> v) {
  const auto profile = latitude_profile(g, v);
  const Interpolant p(v);
  const auto [lo, hi] = std::minmax_element(profile.ratio.begin(), profile.ratio.end());
  if (*hi - *lo < kTieRange) {
    auto r = evaluate(p, 0.0);
    r.I = *lo;
    r.tie = true;
    return r;
  }
  const auto j = static_cast<std::size_t>(lo - profile.ratio.begin());
  const double h = g.spacing();
  if (j == 0 || j + 1 == profile.ratio.size()) return evaluate(p, profile.psi[j]);

  // Parabolic vertex through the best grid triple, then Brent on the
  // interpolant inside the same bracket.
  const double guess = profile.psi[j] + h * parabola_offset(profile.ratio[j - 1], profile.ratio[j],
                                                            profile.ratio[j + 1]);
  const auto ratio = [&](double psi) { return p.ratio(psi); };
  const auto [psi_b, I_b] = boost::math::tools::brent_find_minima(
      ratio, profile.psi[j - 1], profile.psi[j + 1], std::numeric_limits<double>::digits / 2);
  double best = psi_b;
  if (ratio(guess) < I_b) best = guess;
  if (ratio(profile.psi[j]) < ratio(best)) best = profile.psi[j];
  return evaluate(p, best);
}

double geodesic_kappa(const grid::PsiGrid& g, std::span<const double> v, double psi) {
  if (static_cast<int>(v.size()) != g.size()) throw invalid_argument("profile size does not match grid");
  if (!(std::fabs(psi) < std::numbers::pi / 2)) throw invalid_argument("latitude must avoid the poles");
  require_positive(v);
  return Interpolant(v).kappa(psi);
}

LatitudeProfile latitude_profile(const grid::CylinderWindow& window, std::span<const double> w) {
  if (static_cast<int>(w.size()) != window.n) throw invalid_argument("profile size does not match window");
  if (window.n < 5) throw invalid_argument("cylinder profile needs at least 5 samples");
  require_positive(w);
  const double h = window.spacing();
  const std::size_t n = w.size();
  // Past either end w grows like exp(2 |x|), so int_{x_end}^{inf} dx / w ~ 1 / (2 w_end).
  const double tail_lo = 1.0 / (2.0 * w.front());
  const double tail_hi = 1.0 / (2.0 * w.back());
  std::vector<double> cumulative(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) cumulative[i] = cumulative[i - 1] + 0.5 * h * (1.0 / w[i - 1] + 1.0 / w[i]);
  LatitudeProfile out;
  out.total_area = kTwoPi * (tail_lo + cumulative.back() + tail_hi);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = window.node(static_cast<int>(i));
    const double L = kTwoPi / std::sqrt(w[i]);
    const double A1 = kTwoPi * (tail_lo + cumulative[i]);
    const double A2 = kTwoPi * (cumulative.back() - cumulative[i] + tail_hi);
    out.psi.push_back(grid::gudermannian(x));
    out.L.push_back(L);
    out.A1.push_back(A1);
    out.A2.push_back(A2);
    out.ratio.push_back(ratio_of(L, A1, A2));
  }
  return out;
}

IsoResult iso_ratio(const grid::CylinderWindow& window, std::span<const double> w) {
  const auto profile = latitude_profile(window, w);
  const auto wx = derivative_uniform(w, window.spacing());
  const auto [lo, hi] = std::minmax_element(profile.ratio.begin(), profile.ratio.end());
  const auto j = static_cast<std::size_t>(lo - profile.ratio.begin());

  auto at = [&](std::size_t i) {
    IsoResult r;
    r.psi_star = profile.psi[i];
    r.L = profile.L[i];
    r.A1 = profile.A1[i];
    r.A2 = profile.A2[i];
    r.I = profile.ratio[i];
    r.kappa = -wx[i] / (2.0 * std::sqrt(w[i]));
    r.stationarity_residual = std::fabs(2.0 * r.kappa - r.L * (1.0 / r.A1 - 1.0 / r.A2));
    return r;
  };
  auto r = at(j);
  if (*hi - *lo < kTieRange) {
    r.tie = true;
    return r;
  }
  if (j == 0 || j + 1 == profile.ratio.size()) return r;

  const double off = parabola_offset(profile.ratio[j - 1], profile.ratio[j], profile.ratio[j + 1]);
  if (off == 0.0) return r;
  // Linear interpolation of every column toward the refined vertex.
  const auto nb = at(off > 0.0 ? j + 1 : j - 1);
  const double a = std::fabs(off);
  auto lerp = [a](double x0, double x1) { return x0 + a * (x1 - x0); };
  const double x_star = window.node(static_cast<int>(j)) + off * window.spacing();
  r.psi_star = grid::gudermannian(x_star);
  r.L = lerp(r.L, nb.L);
  r.A1 = lerp(r.A1, nb.A1);
  r.A2 = lerp(r.A2, nb.A2);
  r.kappa = lerp(r.kappa, nb.kappa);
  r.I = ratio_of(r.L, r.A1, r.A2);
  r.stationarity_residual = std::fabs(2.0 * r.kappa - r.L * (1.0 / r.A1 - 1.0 / r.A2));
  return r;
}

HamiltonReport hamilton_inequality_check(std::span<const IsoSample> samples) {
  if (samples.size() < 3) throw invalid_argument("Hamilton check needs at least three samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].t < 0.0)) throw invalid_argument("Hamilton check needs t < 0");
    if (i > 0 && !(samples[i].t > samples[i - 1].t)) {
      throw invalid_argument("Hamilton check needs strictly increasing sample times");
    }
  }
  HamiltonReport rep;
  rep.min_slack_simple = std::numeric_limits<double>::infinity();
  rep.min_slack_full = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    if (s.iso.I > 1.0 + 1e-6) rep.gate_fired = true;
  }
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
    const double hm = samples[i].t - samples[i - 1].t;
    const double hp = samples[i + 1].t - samples[i].t;
    const double Im = samples[i - 1].iso.I;
    const double I0 = samples[i].iso.I;
    const double Ip = samples[i + 1].iso.I;
    const double dI = (-hp / (hm * (hm + hp))) * Im + ((hp - hm) / (hm * hp)) * I0 + (hm / (hp * (hm + hp))) * Ip;
    const auto& r = samples[i].iso;
    const double core = I0 * (1.0 - I0 * I0);
    const double simple = core / std::fabs(samples[i].t);
    const double full = kFourPi * (r.A1 * r.A1 + r.A2 * r.A2) / (r.A1 * r.A2 * (r.A1 + r.A2)) * core;
    rep.t.push_back(samples[i].t);
    rep.I.push_back(I0);
    rep.dI_dt.push_back(dI);
    rep.slack_simple.push_back(dI - simple);
    rep.slack_full.push_back(dI - full);
    rep.min_slack_simple = std::min(rep.min_slack_simple, dI - simple);
    rep.min_slack_full = std::min(rep.min_slack_full, dI - full);
    rep.dI_dt_scale = std::max(rep.dI_dt_scale, std::fabs(dI));
  }
  return rep;
}

}  // namespace ancient::iso
