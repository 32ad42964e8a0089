#pragma once

// Discretization of the round sphere in latitude/longitude coordinates
// (psi in (-pi/2, pi/2), theta in [0, 2 pi)) and of the Mercator cylinder.
//
// Latitude nodes are cell centred, psi_j = -pi/2 + (j + 1/2) h, so no node
// sits on a pole and tan(psi), sec^2(psi) are finite everywhere. Stencils
// reaching past a pole read mirrored ghost values: radial fields reflect
// j -> -j-1 (with a sign flip for odd parity), 2-D fields additionally
// shift theta by pi.

#include <memory>
#include <span>
#include <vector>

namespace ancient::grid {

enum class Parity { Even, Odd };

class PsiGrid {
 public:
  explicit PsiGrid(int n_cells);

  int size() const noexcept { return n_; }
  double spacing() const noexcept { return h_; }
  double node(int j) const { return tables_->psi[static_cast<std::size_t>(j)]; }

  std::span<const double> nodes() const noexcept { return tables_->psi; }
  std::span<const double> cos_psi() const noexcept { return tables_->cos; }
  std::span<const double> sin_psi() const noexcept { return tables_->sin; }
  std::span<const double> tan_psi() const noexcept { return tables_->tan; }

  /// Weights w_j with sum_j w_j g(sin psi_j) ~ int_{-1}^{1} g(s) ds.
  /// The nodes sin(psi_j) are the first-kind Chebyshev points, so these are
  /// Fejer's first-rule weights and integrate polynomials in sin(psi) of
  /// degree < n exactly.
  std::span<const double> fejer_weights() const noexcept { return tables_->fejer; }

 private:
  struct Tables {
    std::vector<double> psi, cos, sin, tan, fejer;
  };

  int n_;
  double h_;
  std::shared_ptr<const Tables> tables_;
};

class ThetaGrid {
 public:
  /// m_cells must be even so the pole reflection theta -> theta + pi lands
  /// on a node.
  explicit ThetaGrid(int m_cells);

  int size() const noexcept { return m_; }
  double spacing() const noexcept { return h_; }
  double node(int k) const noexcept { return h_ * k; }
  int wrap(int k) const noexcept { return ((k % m_) + m_) % m_; }

 private:
  int m_;
  double h_;
};

/// Row-major samples over PsiGrid x ThetaGrid: value(j, k) at (psi_j, theta_k).
class Field2D {
 public:
  Field2D() = default;
  Field2D(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {}

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  double& operator()(int j, int k) { return data_[index(j, k)]; }
  double operator()(int j, int k) const { return data_[index(j, k)]; }

  std::span<double> row(int j) { return {data_.data() + index(j, 0), static_cast<std::size_t>(cols_)}; }
  std::span<const double> row(int j) const {
    return {data_.data() + index(j, 0), static_cast<std::size_t>(cols_)};
  }

  std::vector<double>& values() noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  /// Broadcast a radial profile over every longitude.
  static Field2D from_radial(std::span<const double> radial, int cols);

 private:
  std::size_t index(int j, int k) const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(k);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// Uniform sample window x_min..x_max (inclusive, n nodes) in the cylinder
/// gauge. Only used to evaluate and integrate closed forms.
struct CylinderWindow {
  double x_min;
  double x_max;
  int n;

  CylinderWindow(double x_min, double x_max, int n);

  double spacing() const noexcept { return (x_max - x_min) / (n - 1); }
  double node(int i) const noexcept { return x_min + spacing() * i; }
  std::vector<double> nodes() const;
};

// Mercator projection: cosh x = sec psi.
double gudermannian(double x);          // psi(x) = atan(sinh x)
double inverse_gudermannian(double psi);  // x(psi) = asinh(tan psi)

/// 4th-order central d^order f / dpsi^order with parity ghosts. order in {1,2,3}.
std::vector<double> d_dpsi(std::span<const double> f, const PsiGrid& g, int order,
                           Parity parity = Parity::Even);

/// f_psipsi - tan(psi) f_psi for an even radial field.
std::vector<double> laplacian_radial(std::span<const double> f, const PsiGrid& g);

/// psi-derivative of a 2-D field; ghosts reflect across the pole with theta -> theta + pi.
Field2D d_dpsi(const Field2D& f, const PsiGrid& g, int order);

/// 4th-order periodic theta-derivative, order in {1,2}.
Field2D d_dtheta(const Field2D& f, const ThetaGrid& g, int order);

/// Round-sphere Laplacian f_psipsi - tan(psi) f_psi + sec^2(psi) f_thetatheta.
Field2D laplacian_full(const Field2D& f, const PsiGrid& pg, const ThetaGrid& tg);

/// int f da over S^2 with da = cos(psi) dpsi dtheta; radial fields carry 2 pi.
double integrate_sphere(std::span<const double> f, const PsiGrid& g);
double integrate_sphere(const Field2D& f, const PsiGrid& pg, const ThetaGrid& tg);

/// Sample a radial field at psi(x) for every window node by monotone cubic
/// interpolation. Throws out_of_range when a node maps outside the latitude
/// nodes' span.
std::vector<double> to_cylinder(std::span<const double> f, const PsiGrid& g,
                                const CylinderWindow& window);

namespace detail {
/// Copy f into a buffer with `ghosts` mirrored cells on each side.
void pad_radial(std::span<const double> f, Parity parity, int ghosts, std::vector<double>& out);
}  // namespace detail

}  // namespace ancient::grid
