#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "ancient/grid.hpp"

namespace testing {

inline std::vector<double> sample(const ancient::grid::PsiGrid& g, const std::function<double(double)>& f) {
  std::vector<double> out;
  for (double p : g.nodes()) out.push_back(f(p));
  return out;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

inline double max_rel_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]) / std::fabs(b[i]));
  return m;
}

inline double observed_order(double coarse_err, double fine_err) { return std::log2(coarse_err / fine_err); }

// Central difference of a scalar function, step chosen for ~1e-10 accuracy.
inline double central(const std::function<double(double)>& f, double x, double h = 1e-5) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

}  // namespace testing
