#pragma once

// Method-of-lines integration of the radial pressure equation
//     v_t = v (v_psipsi - tan(psi) v_psi) - v_psi^2 + 2 v^2
// on the pole-avoiding latitude grid with classical RK4.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ancient/error.hpp"
#include "ancient/grid.hpp"

namespace ancient::flow1d {

struct RadialState {
  grid::PsiGrid grid;
  std::vector<double> v;  // even parity, strictly positive
  double t;
};

struct StepControls {
  double cfl_sigma = 0.2;
  double v_cap = 1e6;
  long max_steps = 50'000'000;
};

/// A step produced a non-positive or non-finite pressure.
class StepFailure : public Error {
 public:
  StepFailure(int node, double t, double value);

  int node() const noexcept { return node_; }
  double time() const noexcept { return t_; }

 private:
  int node_;
  double t_;
};

enum class Status { Completed, Extinct, MaxSteps, Failed };

const char* to_string(Status s);

struct EvolveResult {
  RadialState state;  // final (or last good) state
  Status status = Status::Completed;
  long steps = 0;
  std::optional<double> extinction_time;
  std::string failure;  // StepFailure message when status == Failed
};

using Observer = std::function<void(const RadialState&)>;

/// Validates positivity/finiteness and grid/field agreement; throws otherwise.
void validate(const RadialState& state);

std::vector<double> rhs(const RadialState& state);

/// sigma h^2 / max v.
double cfl_dt(const RadialState& state, const StepControls& controls);

/// One RK4 step. dt above the CFL bound is rejected.
RadialState step(const RadialState& state, double dt, const StepControls& controls = {});

/// Integrate to t_end. The observer sees the initial state, every multiple of
/// observe_every past the start (0 disables intermediate samples) and the
/// final state. Stops early once max v exceeds controls.v_cap and estimates
/// the extinction time from the last 20 steps.
EvolveResult evolve(RadialState state, double t_end, const StepControls& controls,
                    const Observer& observer = {}, double observe_every = 0.0);

/// Extinction time from a least-squares line through (t, 1 / (2 max v)).
double fit_extinction_time(std::span<const double> t, std::span<const double> max_v);

namespace detail {
/// rhs into `out`, reusing `padded` as scratch.
void rhs_into(const grid::PsiGrid& g, std::span<const double> v, std::span<double> out,
              std::vector<double>& padded);
}  // namespace detail

}  // namespace ancient::flow1d
