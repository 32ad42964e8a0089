#include <fftw3.h>

#include <cmath>
#include <complex>
#include <vector>

#include "ancient/error.hpp"
#include "ancient/flow2d.hpp"
#include "fftw_planner.hpp"

namespace ancient::flow2d {

struct PolarFilter::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit Plans(int m) {
    std::vector<double> real(static_cast<std::size_t>(m));
    std::vector<std::complex<double>> spec(static_cast<std::size_t>(m / 2 + 1));
    auto* cplx = reinterpret_cast<fftw_complex*>(spec.data());
    std::lock_guard lock(detail::fftw_planner_mutex());
    forward = fftw_plan_dft_r2c_1d(m, real.data(), cplx, FFTW_ESTIMATE | FFTW_UNALIGNED);
    backward = fftw_plan_dft_c2r_1d(m, cplx, real.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  }

  ~Plans() {
    std::lock_guard lock(detail::fftw_planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

PolarFilter::PolarFilter(const grid::PsiGrid& pg, const grid::ThetaGrid& tg, double threshold)
    : rows_(pg.size()), cols_(tg.size()) {
  if (!(threshold > 0.0)) throw invalid_argument("polar filter threshold must be positive");
  const int modes = cols_ / 2 + 1;
  factors_.assign(static_cast<std::size_t>(rows_ * modes), 1.0);
  active_.assign(static_cast<std::size_t>(rows_), 0);
  const auto cos = pg.cos_psi();
  for (int j = 0; j < rows_; ++j) {
    for (int k = 0; k < modes; ++k) {
      const double r = k * tg.spacing() / cos[static_cast<std::size_t>(j)] / threshold;
      if (r > 1.0) {
        const double excess = r - 1.0;
        factors_[static_cast<std::size_t>(j * modes + k)] = std::exp(-36.0 * excess * excess);
        active_[static_cast<std::size_t>(j)] = 1;
      }
    }
  }
  plans_ = std::make_unique<Plans>(cols_);
}

PolarFilter::~PolarFilter() = default;

double PolarFilter::factor(int row, int k) const {
  const int modes = cols_ / 2 + 1;
  const int kk = std::abs(k) % cols_;
  const int folded = kk > cols_ / 2 ? cols_ - kk : kk;
  return factors_[static_cast<std::size_t>(row * modes + folded)];
}

void PolarFilter::apply(grid::Field2D& f) const {
  if (f.rows() != rows_ || f.cols() != cols_) throw invalid_argument("field shape does not match filter");
  const int modes = cols_ / 2 + 1;
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(modes));
  auto* cplx = reinterpret_cast<fftw_complex*>(spec.data());
  const double inv_m = 1.0 / cols_;
  for (int j = 0; j < rows_; ++j) {
    if (!active_[static_cast<std::size_t>(j)]) continue;
    auto row = f.row(j);
    fftw_execute_dft_r2c(plans_->forward, row.data(), cplx);
    for (int k = 0; k < modes; ++k) {
      spec[static_cast<std::size_t>(k)] *= factors_[static_cast<std::size_t>(j * modes + k)] * inv_m;
    }
    fftw_execute_dft_c2r(plans_->backward, cplx, row.data());
  }
}

}  // namespace ancient::flow2d
