#pragma once

// Time loop shared by the radial and 2-D solvers: CFL-limited steps that
// land exactly on sample times, extinction detection on max v, and
// rollback to the last good state on a StepFailure.

#include <algorithm>
#include <deque>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ancient/error.hpp"
#include "ancient/flow1d.hpp"

namespace ancient::detail {

struct LoopOutcome {
  flow1d::Status status = flow1d::Status::Completed;
  long steps = 0;
  std::optional<double> extinction_time;
  std::string failure;
};

// Solver concept:
//   double time(const State&), void set_time(State&, double)
//   double max_v(const State&), double cfl(const State&)
//   void advance(State&, double dt)          (RK4 in place)
//   void check(const State&)                 (throws flow1d::StepFailure)
//   State snapshot / restore via copy
template <class State, class Solver, class Observer>
LoopOutcome run_evolve_loop(State& state, double t_end, long max_steps, double v_cap,
                            Solver& solver, const Observer& observer, double observe_every) {
  constexpr std::size_t kFitWindow = 20;
  if (!(t_end > solver.time(state))) {
    std::ostringstream msg;
    msg << "t_end = " << t_end << " must lie after the current time t = " << solver.time(state);
    throw invalid_argument(msg.str());
  }
  if (observe_every < 0.0) throw invalid_argument("observe_every must be non-negative");

  LoopOutcome out;
  const double t_start = solver.time(state);
  long next_sample = 1;
  auto next_obs_time = [&] {
    if (observe_every <= 0.0) return t_end;
    const double next = t_start + static_cast<double>(next_sample) * observe_every;
    // Snap a sample that rounds to just before t_end onto t_end.
    return (t_end - next < 1e-9 * observe_every) ? t_end : next;
  };
  double last_observed = t_start;
  if (observer) observer(state);

  std::deque<double> hist_t, hist_v;
  while (solver.time(state) < t_end) {
    if (out.steps >= max_steps) {
      out.status = flow1d::Status::MaxSteps;
      break;
    }
    const double vmax = solver.max_v(state);
    if (vmax > v_cap) {
      if (hist_t.size() >= 2) {
        std::vector<double> ts(hist_t.begin(), hist_t.end());
        std::vector<double> vs(hist_v.begin(), hist_v.end());
        out.extinction_time = flow1d::fit_extinction_time(ts, vs);
      }
      out.status = flow1d::Status::Extinct;
      break;
    }
    const double t = solver.time(state);
    double dt = solver.cfl(state);
    const double target = std::min(t_end, next_obs_time());
    bool lands = false;
    if (t + dt >= target) {
      dt = target - t;
      lands = true;
    }
    State previous = state;
    solver.advance(state, dt);
    solver.set_time(state, lands ? target : t + dt);
    try {
      solver.check(state);
    } catch (const flow1d::StepFailure& failure) {
      state = std::move(previous);
      out.status = flow1d::Status::Failed;
      out.failure = failure.what();
      break;
    }
    ++out.steps;

    hist_t.push_back(solver.time(state));
    hist_v.push_back(solver.max_v(state));
    if (hist_t.size() > kFitWindow) {
      hist_t.pop_front();
      hist_v.pop_front();
    }

    if (lands && observe_every > 0.0 && solver.time(state) < t_end) {
      ++next_sample;
      if (observer) {
        observer(state);
        last_observed = solver.time(state);
      }
    }
  }
  if (observer && solver.time(state) != last_observed) observer(state);
  return out;
}

}  // namespace ancient::detail
