#include "ancient/flow2d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "evolve_loop.hpp"

namespace ancient::flow2d {

namespace {

double max_value(const grid::Field2D& f) {
  return *std::max_element(f.values().begin(), f.values().end());
}

void check_positive(const grid::Field2D& v, double t) {
  for (int j = 0; j < v.rows(); ++j) {
    for (int k = 0; k < v.cols(); ++k) {
      const double x = v(j, k);
      if (!(x > 0.0) || !std::isfinite(x)) throw flow1d::StepFailure(j * v.cols() + k, t, x);
    }
  }
}

// Reads row `j` of f (possibly a ghost row past a pole) at column k.
struct RowReader {
  const grid::Field2D& f;
  int n, m;

  double operator()(int j, int k) const {
    if (j < 0) return f(-j - 1, (k + m / 2) % m);
    if (j >= n) return f(2 * n - 1 - j, (k + m / 2) % m);
    return f(j, k);
  }
};

void rhs2d_into(const grid::PsiGrid& pg, const grid::ThetaGrid& tg, const grid::Field2D& v,
                grid::Field2D& out) {
  const int n = v.rows();
  const int m = v.cols();
  const double h = pg.spacing();
  const double ht = tg.spacing();
  const double inv12h = 1.0 / (12.0 * h);
  const double inv12h2 = 1.0 / (12.0 * h * h);
  const double inv12ht = 1.0 / (12.0 * ht);
  const double inv12ht2 = 1.0 / (12.0 * ht * ht);
  const auto tan = pg.tan_psi();
  const auto cos = pg.cos_psi();
  const RowReader at{v, n, m};
  for (int j = 0; j < n; ++j) {
    const auto u = static_cast<std::size_t>(j);
    const double sec2 = 1.0 / (cos[u] * cos[u]);
    const bool interior = j >= 2 && j < n - 2;
    for (int k = 0; k < m; ++k) {
      double qm2, qm1, qp1, qp2;
      if (interior) {
        qm2 = v(j - 2, k);
        qm1 = v(j - 1, k);
        qp1 = v(j + 1, k);
        qp2 = v(j + 2, k);
      } else {
        qm2 = at(j - 2, k);
        qm1 = at(j - 1, k);
        qp1 = at(j + 1, k);
        qp2 = at(j + 2, k);
      }
      const double q0 = v(j, k);
      const double vp = (qm2 - 8.0 * qm1 + 8.0 * qp1 - qp2) * inv12h;
      const double vpp = (-qm2 + 16.0 * qm1 - 30.0 * q0 + 16.0 * qp1 - qp2) * inv12h2;
      const double tm2 = v(j, tg.wrap(k - 2));
      const double tm1 = v(j, tg.wrap(k - 1));
      const double tp1 = v(j, tg.wrap(k + 1));
      const double tp2 = v(j, tg.wrap(k + 2));
      const double vt = (tm2 - 8.0 * tm1 + 8.0 * tp1 - tp2) * inv12ht;
      const double vtt = (-tm2 + 16.0 * tm1 - 30.0 * q0 + 16.0 * tp1 - tp2) * inv12ht2;
      // Same association as the radial rhs so theta-independent data agree bitwise.
      const double radial = q0 * (vpp - tan[u] * vp) - vp * vp + 2.0 * q0 * q0;
      out(j, k) = radial + sec2 * (q0 * vtt - vt * vt);
    }
  }
}

struct Rk4Workspace2D {
  grid::Field2D k1, k2, k3, k4, stage;
  const PolarFilter* filter;

  Rk4Workspace2D(int n, int m, const PolarFilter* f)
      : k1(n, m), k2(n, m), k3(n, m), k4(n, m), stage(n, m), filter(f) {}

  void eval(const grid::PsiGrid& pg, const grid::ThetaGrid& tg, const grid::Field2D& v,
            grid::Field2D& out) {
    rhs2d_into(pg, tg, v, out);
    if (filter) filter->apply(out);
  }

  void advance(SphereState2D& s, double dt) {
    auto& v = s.v.values();
    const std::size_t size = v.size();
    eval(s.psi_grid, s.theta_grid, s.v, k1);
    for (std::size_t i = 0; i < size; ++i) stage.values()[i] = v[i] + 0.5 * dt * k1.values()[i];
    eval(s.psi_grid, s.theta_grid, stage, k2);
    for (std::size_t i = 0; i < size; ++i) stage.values()[i] = v[i] + 0.5 * dt * k2.values()[i];
    eval(s.psi_grid, s.theta_grid, stage, k3);
    for (std::size_t i = 0; i < size; ++i) stage.values()[i] = v[i] + dt * k3.values()[i];
    eval(s.psi_grid, s.theta_grid, stage, k4);
    for (std::size_t i = 0; i < size; ++i) {
      v[i] += dt / 6.0 *
              (k1.values()[i] + 2.0 * k2.values()[i] + 2.0 * k3.values()[i] + k4.values()[i]);
    }
    if (filter) filter->apply(s.v);
  }
};

}  // namespace

void validate(const SphereState2D& state) {
  if (state.v.rows() != state.psi_grid.size() || state.v.cols() != state.theta_grid.size()) {
    throw invalid_argument("2-D pressure field shape does not match its grids");
  }
  if (!std::isfinite(state.t)) throw invalid_argument("state time must be finite");
  for (int j = 0; j < state.v.rows(); ++j) {
    for (int k = 0; k < state.v.cols(); ++k) {
      const double x = state.v(j, k);
      if (!(x > 0.0) || !std::isfinite(x)) {
        std::ostringstream msg;
        msg << "pressure must be positive and finite; v(" << j << ", " << k << ") = " << x;
        throw invalid_argument(msg.str());
      }
    }
  }
}

grid::Field2D rhs2d(const SphereState2D& state) {
  validate(state);
  grid::Field2D out(state.v.rows(), state.v.cols());
  rhs2d_into(state.psi_grid, state.theta_grid, state.v, out);
  return out;
}

double cfl_dt2d(const SphereState2D& state, const StepControls2D& controls) {
  if (!(controls.cfl_sigma > 0.0) || controls.cfl_sigma > 1.0) {
    throw invalid_argument("cfl_sigma must lie in (0, 1]");
  }
  const double h = state.psi_grid.spacing();
  const double ht = state.theta_grid.spacing();
  const double h_eff = controls.polar_filter ? ht / (2.0 * controls.filter_threshold)
                                             : state.psi_grid.cos_psi()[0] * ht;
  return controls.cfl_sigma * std::min(h * h, h_eff * h_eff) / max_value(state.v);
}

SphereState2D step2d(const SphereState2D& state, double dt, const StepControls2D& controls) {
  validate(state);
  const double limit = cfl_dt2d(state, controls);
  if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "time step " << dt << " outside (0, " << limit << "] allowed by the CFL bound";
    throw invalid_argument(msg.str());
  }
  std::optional<PolarFilter> filter;
  if (controls.polar_filter) {
    filter.emplace(state.psi_grid, state.theta_grid, controls.filter_threshold);
  }
  SphereState2D next = state;
  Rk4Workspace2D ws(state.v.rows(), state.v.cols(), filter ? &*filter : nullptr);
  ws.advance(next, dt);
  next.t = state.t + dt;
  check_positive(next.v, next.t);
  return next;
}

EvolveResult2D evolve2d(SphereState2D state, double t_end, const StepControls2D& controls,
                        const Observer2D& observer, double observe_every) {
  validate(state);
  std::optional<PolarFilter> filter;
  if (controls.polar_filter) {
    filter.emplace(state.psi_grid, state.theta_grid, controls.filter_threshold);
  }
  struct Solver {
    const StepControls2D& controls;
    Rk4Workspace2D ws;
    double time(const SphereState2D& s) const { return s.t; }
    void set_time(SphereState2D& s, double t) const { s.t = t; }
    double max_v(const SphereState2D& s) const { return max_value(s.v); }
    double cfl(const SphereState2D& s) const { return cfl_dt2d(s, controls); }
    void advance(SphereState2D& s, double dt) { ws.advance(s, dt); }
    void check(const SphereState2D& s) const { check_positive(s.v, s.t); }
  } solver{controls, Rk4Workspace2D(state.v.rows(), state.v.cols(), filter ? &*filter : nullptr)};

  const auto outcome = ancient::detail::run_evolve_loop(state, t_end, controls.max_steps,
                                                        controls.v_cap, solver, observer,
                                                        observe_every);
  return {std::move(state), outcome.status, outcome.steps, outcome.extinction_time,
          outcome.failure};
}

double theta_variation(const grid::Field2D& v) {
  double scale = 0.0;
  for (double x : v.values()) scale = std::max(scale, std::fabs(x));
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (int j = 0; j < v.rows(); ++j) {
    const auto row = v.row(j);
    const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
    worst = std::max(worst, *hi - *lo);
  }
  return worst / scale;
}

}  // namespace ancient::flow2d
