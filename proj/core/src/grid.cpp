#include "ancient/grid.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/interpolators/cubic_hermite.hpp>

#include <numbers>
#include <sstream>

#include "ancient/error.hpp"

namespace ancient::grid {

namespace {

constexpr double pi = std::numbers::pi;
constexpr int kGhosts = 3;

void check_order(int order) {
  if (order < 1 || order > 3) {
    throw invalid_argument("derivative order must be 1, 2 or 3 (got " + std::to_string(order) + ")");
  }
}

// 4th-order central stencils written on differences, so constants give exactly 0.
// at(o) returns the sample at offset o in -3..3.
template <class At>
double stencil(int order, const At& at) {
  switch (order) {
    case 1: return (8.0 * (at(1) - at(-1)) - (at(2) - at(-2))) / 12.0;
    case 2: {
      const double f0 = at(0);
      return (16.0 * ((at(1) - f0) + (at(-1) - f0)) - ((at(2) - f0) + (at(-2) - f0))) / 12.0;
    }
    default: return (-(at(3) - at(-3)) + 8.0 * (at(2) - at(-2)) - 13.0 * (at(1) - at(-1))) / 8.0;
  }
}

int mirror_row(int j, int n) {
  if (j < 0) return -j - 1;
  if (j >= n) return 2 * n - 1 - j;
  return j;
}

}  // namespace

PsiGrid::PsiGrid(int n_cells) : n_(n_cells), h_(0.0) {
  if (n_cells < 8) {
    throw invalid_argument("PsiGrid needs at least 8 cells (got " + std::to_string(n_cells) + ")");
  }
  h_ = pi / n_cells;
  auto t = std::make_shared<Tables>();
  const auto n = static_cast<std::size_t>(n_cells);
  t->psi.resize(n);
  t->cos.resize(n);
  t->sin.resize(n);
  t->tan.resize(n);
  t->fejer.resize(n);
  for (int j = 0; j < n_cells; ++j) {
    const auto u = static_cast<std::size_t>(j);
    const double psi = -pi / 2 + (j + 0.5) * h_;
    t->psi[u] = psi;
    // cos(psi_j) = sin((j + 1/2) h) stays accurate next to the south pole.
    t->cos[u] = std::sin((j + 0.5) * h_);
    t->sin[u] = std::sin(psi);
    t->tan[u] = t->sin[u] / t->cos[u];
  }
  // Mirror-symmetrize so reflection-symmetric fields stay exactly symmetric.
  for (int j = 0; j < n_cells / 2; ++j) {
    const auto a = static_cast<std::size_t>(j);
    const auto b = static_cast<std::size_t>(n_cells - 1 - j);
    t->cos[b] = t->cos[a];
    t->sin[b] = -t->sin[a];
    t->tan[b] = -t->tan[a];
    t->psi[b] = -t->psi[a];
  }
  const int half = n_cells / 2;
  for (int j = 0; j < n_cells; ++j) {
    const double colat = pi / 2 - t->psi[static_cast<std::size_t>(j)];
    double acc = 0.0;
    for (int k = 1; k <= half; ++k) {
      acc += std::cos(2.0 * k * colat) / (4.0 * k * k - 1.0);
    }
    t->fejer[static_cast<std::size_t>(j)] = 2.0 / n_cells * (1.0 - 2.0 * acc);
  }
  for (int j = 0; j < n_cells / 2; ++j) {
    t->fejer[static_cast<std::size_t>(n_cells - 1 - j)] = t->fejer[static_cast<std::size_t>(j)];
  }
  tables_ = std::move(t);
}

ThetaGrid::ThetaGrid(int m_cells) : m_(m_cells), h_(0.0) {
  if (m_cells < 4 || m_cells % 2 != 0) {
    throw invalid_argument("ThetaGrid needs an even number of cells >= 4 (got " +
                           std::to_string(m_cells) + ")");
  }
  h_ = 2.0 * pi / m_cells;
}

Field2D Field2D::from_radial(std::span<const double> radial, int cols) {
  Field2D f(static_cast<int>(radial.size()), cols);
  for (int j = 0; j < f.rows(); ++j) {
    for (int k = 0; k < cols; ++k) f(j, k) = radial[static_cast<std::size_t>(j)];
  }
  return f;
}

CylinderWindow::CylinderWindow(double lo, double hi, int count) : x_min(lo), x_max(hi), n(count) {
  if (!(hi > lo) || count < 2) {
    throw invalid_argument("cylinder window needs x_max > x_min and at least 2 nodes");
  }
}

std::vector<double> CylinderWindow::nodes() const {
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = node(i);
  return xs;
}

double gudermannian(double x) { return std::atan(std::sinh(x)); }

double inverse_gudermannian(double psi) { return std::asinh(std::tan(psi)); }

namespace detail {

void pad_radial(std::span<const double> f, Parity parity, int ghosts, std::vector<double>& out) {
  const int n = static_cast<int>(f.size());
  out.resize(f.size() + 2 * static_cast<std::size_t>(ghosts));
  const double sign = parity == Parity::Even ? 1.0 : -1.0;
  for (int i = -ghosts; i < n + ghosts; ++i) {
    const int src = mirror_row(i, n);
    const double value = f[static_cast<std::size_t>(src)];
    out[static_cast<std::size_t>(i + ghosts)] = (src == i) ? value : sign * value;
  }
}

}  // namespace detail

std::vector<double> d_dpsi(std::span<const double> f, const PsiGrid& g, int order, Parity parity) {
  check_order(order);
  if (static_cast<int>(f.size()) != g.size()) {
    throw invalid_argument("field size does not match PsiGrid");
  }
  std::vector<double> padded;
  detail::pad_radial(f, parity, kGhosts, padded);
  const double scale = 1.0 / std::pow(g.spacing(), order);
  std::vector<double> out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double* p = padded.data() + j + kGhosts;
    out[j] = stencil(order, [p](int o) { return p[o]; }) * scale;
  }
  return out;
}

std::vector<double> laplacian_radial(std::span<const double> f, const PsiGrid& g) {
  auto fpp = d_dpsi(f, g, 2);
  const auto fp = d_dpsi(f, g, 1);
  const auto tan = g.tan_psi();
  for (std::size_t j = 0; j < fpp.size(); ++j) fpp[j] -= tan[j] * fp[j];
  return fpp;
}

Field2D d_dpsi(const Field2D& f, const PsiGrid& g, int order) {
  check_order(order);
  const int n = f.rows();
  const int m = f.cols();
  if (n != g.size() || m % 2 != 0) {
    throw invalid_argument("2-D field shape does not match the grids");
  }
  const double scale = 1.0 / std::pow(g.spacing(), order);
  Field2D out(n, m);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < m; ++k) {
      const auto at = [&](int o) {
        const int jj = j + o;
        const int src = mirror_row(jj, n);
        return f(src, src == jj ? k : (k + m / 2) % m);
      };
      out(j, k) = stencil(order, at) * scale;
    }
  }
  return out;
}

Field2D d_dtheta(const Field2D& f, const ThetaGrid& g, int order) {
  if (order != 1 && order != 2) {
    throw invalid_argument("theta derivative order must be 1 or 2 (got " + std::to_string(order) + ")");
  }
  const int m = f.cols();
  if (m != g.size()) throw invalid_argument("2-D field shape does not match ThetaGrid");
  const double scale = 1.0 / std::pow(g.spacing(), order);
  Field2D out(f.rows(), m);
  for (int j = 0; j < f.rows(); ++j) {
    const auto row = f.row(j);
    for (int k = 0; k < m; ++k) {
      const auto at = [&](int o) { return row[static_cast<std::size_t>(g.wrap(k + o))]; };
      out(j, k) = stencil(order, at) * scale;
    }
  }
  return out;
}

Field2D laplacian_full(const Field2D& f, const PsiGrid& pg, const ThetaGrid& tg) {
  Field2D lap = d_dpsi(f, pg, 2);
  const Field2D fp = d_dpsi(f, pg, 1);
  const Field2D ftt = d_dtheta(f, tg, 2);
  const auto cos = pg.cos_psi();
  const auto tan = pg.tan_psi();
  for (int j = 0; j < f.rows(); ++j) {
    const auto u = static_cast<std::size_t>(j);
    const double sec2 = 1.0 / (cos[u] * cos[u]);
    for (int k = 0; k < f.cols(); ++k) {
      lap(j, k) += -tan[u] * fp(j, k) + sec2 * ftt(j, k);
    }
  }
  return lap;
}

double integrate_sphere(std::span<const double> f, const PsiGrid& g) {
  if (static_cast<int>(f.size()) != g.size()) throw invalid_argument("field size does not match PsiGrid");
  const auto w = g.fejer_weights();
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) acc += w[j] * f[j];
  return 2.0 * pi * acc;
}

double integrate_sphere(const Field2D& f, const PsiGrid& pg, const ThetaGrid& tg) {
  if (f.rows() != pg.size() || f.cols() != tg.size()) {
    throw invalid_argument("2-D field shape does not match the grids");
  }
  const auto w = pg.fejer_weights();
  double acc = 0.0;
  for (int j = 0; j < f.rows(); ++j) {
    double row_sum = 0.0;
    for (double value : f.row(j)) row_sum += value;
    acc += w[static_cast<std::size_t>(j)] * row_sum;
  }
  return acc * tg.spacing();
}

std::vector<double> to_cylinder(std::span<const double> f, const PsiGrid& g,
                                const CylinderWindow& window) {
  if (static_cast<int>(f.size()) != g.size()) throw invalid_argument("field size does not match PsiGrid");
  const double lo = g.node(0);
  const double hi = g.node(g.size() - 1);
  const double psi_lo = gudermannian(window.x_min);
  const double psi_hi = gudermannian(window.x_max);
  if (psi_lo < lo || psi_hi > hi) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "cylinder window [" << window.x_min << ", " << window.x_max << "] maps to psi in ["
        << psi_lo << ", " << psi_hi << "] but the grid covers only [" << lo << ", " << hi
        << "] (|x| <= " << inverse_gudermannian(hi) << ")";
    throw out_of_range(msg.str());
  }
  std::vector<double> xs(g.nodes().begin(), g.nodes().end());
  std::vector<double> ys(f.begin(), f.end());
  std::vector<double> dydx = d_dpsi(f, g, 1);
  boost::math::interpolators::cubic_hermite<std::vector<double>> interp(std::move(xs), std::move(ys),
                                                                       std::move(dydx));
  std::vector<double> out(static_cast<std::size_t>(window.n));
  for (int i = 0; i < window.n; ++i) {
    const double psi = std::clamp(gudermannian(window.node(i)), lo, hi);
    out[static_cast<std::size_t>(i)] = interp(psi);
  }
  return out;
}

}  // namespace ancient::grid
