#include "ancient/flow1d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "evolve_loop.hpp"

namespace ancient::flow1d {

namespace {

constexpr int kGhosts = 2;

std::string failure_message(int node, double t, double value) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "pressure lost positivity or finiteness at node " << node << " (v = " << value
      << ") at t = " << t;
  return msg.str();
}

double max_value(std::span<const double> v) { return *std::max_element(v.begin(), v.end()); }

void check_positive(std::span<const double> v, double t) {
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (!(v[j] > 0.0) || !std::isfinite(v[j])) throw StepFailure(static_cast<int>(j), t, v[j]);
  }
}

// Classical RK4 with caller-owned scratch so evolve() does not allocate per step.
struct Rk4Workspace {
  std::vector<double> k1, k2, k3, k4, stage, padded;

  explicit Rk4Workspace(std::size_t n) : k1(n), k2(n), k3(n), k4(n), stage(n) {}

  void advance(const grid::PsiGrid& g, std::vector<double>& v, double dt) {
    const std::size_t n = v.size();
    detail::rhs_into(g, v, k1, padded);
    for (std::size_t j = 0; j < n; ++j) stage[j] = v[j] + 0.5 * dt * k1[j];
    detail::rhs_into(g, stage, k2, padded);
    for (std::size_t j = 0; j < n; ++j) stage[j] = v[j] + 0.5 * dt * k2[j];
    detail::rhs_into(g, stage, k3, padded);
    for (std::size_t j = 0; j < n; ++j) stage[j] = v[j] + dt * k3[j];
    detail::rhs_into(g, stage, k4, padded);
    for (std::size_t j = 0; j < n; ++j) {
      v[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
  }
};

}  // namespace

StepFailure::StepFailure(int node, double t, double value)
    : Error("step_failure", failure_message(node, t, value)), node_(node), t_(t) {}

const char* to_string(Status s) {
  switch (s) {
    case Status::Completed: return "completed";
    case Status::Extinct: return "extinct";
    case Status::MaxSteps: return "max_steps";
    case Status::Failed: return "failed";
  }
  return "unknown";
}

void validate(const RadialState& state) {
  if (static_cast<int>(state.v.size()) != state.grid.size()) {
    throw invalid_argument("pressure field size does not match its grid");
  }
  if (!std::isfinite(state.t)) throw invalid_argument("state time must be finite");
  for (std::size_t j = 0; j < state.v.size(); ++j) {
    if (!(state.v[j] > 0.0) || !std::isfinite(state.v[j])) {
      throw invalid_argument(failure_message(static_cast<int>(j), state.t, state.v[j]));
    }
  }
}

namespace detail {

void rhs_into(const grid::PsiGrid& g, std::span<const double> v, std::span<double> out,
              std::vector<double>& padded) {
  grid::detail::pad_radial(v, grid::Parity::Even, kGhosts, padded);
  const double h = g.spacing();
  const double inv12h = 1.0 / (12.0 * h);
  const double inv12h2 = 1.0 / (12.0 * h * h);
  const auto tan = g.tan_psi();
  const double* p = padded.data() + kGhosts;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double* q = p + j;
    const double vp = (q[-2] - 8.0 * q[-1] + 8.0 * q[1] - q[2]) * inv12h;
    const double vpp = (-q[-2] + 16.0 * q[-1] - 30.0 * q[0] + 16.0 * q[1] - q[2]) * inv12h2;
    const double vj = q[0];
    out[j] = vj * (vpp - tan[j] * vp) - vp * vp + 2.0 * vj * vj;
  }
}

}  // namespace detail

std::vector<double> rhs(const RadialState& state) {
  validate(state);
  std::vector<double> out(state.v.size());
  std::vector<double> padded;
  detail::rhs_into(state.grid, state.v, out, padded);
  return out;
}

double cfl_dt(const RadialState& state, const StepControls& controls) {
  if (!(controls.cfl_sigma > 0.0) || controls.cfl_sigma > 1.0) {
    throw invalid_argument("cfl_sigma must lie in (0, 1]");
  }
  const double h = state.grid.spacing();
  return controls.cfl_sigma * h * h / max_value(state.v);
}

RadialState step(const RadialState& state, double dt, const StepControls& controls) {
  validate(state);
  const double limit = cfl_dt(state, controls);
  if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "time step " << dt << " outside (0, " << limit << "] allowed by the CFL bound";
    throw invalid_argument(msg.str());
  }
  RadialState next = state;
  Rk4Workspace ws(state.v.size());
  ws.advance(next.grid, next.v, dt);
  next.t = state.t + dt;
  check_positive(next.v, next.t);
  return next;
}

double fit_extinction_time(std::span<const double> t, std::span<const double> max_v) {
  if (t.size() != max_v.size() || t.size() < 2) {
    throw invalid_argument("extinction fit needs at least two (t, max v) samples");
  }
  const double n = static_cast<double>(t.size());
  // Centre t so the normal equations stay well conditioned near t ~ 0.
  double t_mean = 0.0;
  for (double ti : t) t_mean += ti;
  t_mean /= n;
  double sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double x = t[i] - t_mean;
    const double y = 1.0 / (2.0 * max_v[i]);
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = sxy / sxx;
  const double intercept = sy / n;
  return t_mean - intercept / slope;
}

EvolveResult evolve(RadialState state, double t_end, const StepControls& controls,
                    const Observer& observer, double observe_every) {
  validate(state);
  struct Solver {
    const StepControls& controls;
    Rk4Workspace ws;
    double time(const RadialState& s) const { return s.t; }
    void set_time(RadialState& s, double t) const { s.t = t; }
    double max_v(const RadialState& s) const { return max_value(s.v); }
    double cfl(const RadialState& s) const { return cfl_dt(s, controls); }
    void advance(RadialState& s, double dt) { ws.advance(s.grid, s.v, dt); }
    void check(const RadialState& s) const { check_positive(s.v, s.t); }
  } solver{controls, Rk4Workspace(state.v.size())};

  const auto outcome = ancient::detail::run_evolve_loop(state, t_end, controls.max_steps,
                                                        controls.v_cap, solver, observer,
                                                        observe_every);
  return {std::move(state), outcome.status, outcome.steps, outcome.extinction_time,
          outcome.failure};
}

}  // namespace ancient::flow1d
