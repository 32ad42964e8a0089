#pragma once

// Full (psi, theta) pressure equation
//     v_t = v Lap v - (v_psi^2 + sec^2 psi v_theta^2) + 2 v^2
// on the latitude/longitude grid, RK4 method of lines with an optional
// polar Fourier filter.

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "ancient/flow1d.hpp"
#include "ancient/grid.hpp"

namespace ancient::flow2d {

struct SphereState2D {
  grid::PsiGrid psi_grid;
  grid::ThetaGrid theta_grid;
  grid::Field2D v;
  double t;
};

struct StepControls2D {
  double cfl_sigma = 0.2;
  double v_cap = 1e6;
  long max_steps = 50'000'000;
  bool polar_filter = true;
  double filter_threshold = 1.0;
};

/// Damps theta-Fourier mode k on latitude psi once r = |k| h_theta / cos psi
/// passes the threshold: factor exp(-36 (r / threshold - 1)^2), which is
/// below 1e-15 by r = 2 threshold.
class PolarFilter {
 public:
  PolarFilter(const grid::PsiGrid& pg, const grid::ThetaGrid& tg, double threshold = 1.0);
  ~PolarFilter();
  PolarFilter(const PolarFilter&) = delete;
  PolarFilter& operator=(const PolarFilter&) = delete;

  double factor(int row, int k) const;
  void apply(grid::Field2D& f) const;

 private:
  struct Plans;
  int rows_, cols_;
  std::vector<double> factors_;  // rows_ x (cols_/2 + 1)
  std::vector<char> active_;     // row needs filtering
  std::unique_ptr<Plans> plans_;
};

using flow1d::Status;

struct EvolveResult2D {
  SphereState2D state;
  Status status = Status::Completed;
  long steps = 0;
  std::optional<double> extinction_time;
  std::string failure;
};

using Observer2D = std::function<void(const SphereState2D&)>;

void validate(const SphereState2D& state);

grid::Field2D rhs2d(const SphereState2D& state);

/// sigma min(h_psi^2, h_eff^2) / max v with h_eff = h_theta / (2 threshold)
/// when the polar filter is on and cos(psi_min) h_theta otherwise.
double cfl_dt2d(const SphereState2D& state, const StepControls2D& controls);

SphereState2D step2d(const SphereState2D& state, double dt, const StepControls2D& controls = {});

EvolveResult2D evolve2d(SphereState2D state, double t_end, const StepControls2D& controls,
                        const Observer2D& observer = {}, double observe_every = 0.0);

/// max over latitudes of (max_theta v - min_theta v), relative to max |v|.
double theta_variation(const grid::Field2D& v);

}  // namespace ancient::flow2d
