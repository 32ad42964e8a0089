#pragma once

// Closed-form ancient solutions of the pressure equation
//     v_t = v Lap v - |grad v|^2 + 2 v^2   on S^2 x (-inf, 0),
// the contracting sphere and the Rosenau family, in the sphere gauge
// (pressure v on latitude psi) and the cylinder gauge (w = v sec^2 psi on
// the Mercator coordinate x). Both become extinct at t = 0.
//
// Rosenau slices are written through the cylinder coefficients
//     w(x, t) = A(t) cosh(2 (x - x0)) + D(t),
//     A = -mu csch(4 mu t),  D = -mu coth(4 mu t),
// which keeps every formula free of cancellation deep in the past.

#include <span>
#include <vector>

#include "ancient/grid.hpp"

namespace ancient::exact {

enum class Kind { ContractingSphere, Rosenau };

/// Coefficients of the cylinder-gauge Rosenau profile at time t.
struct RosenauCoefficients {
  double a_tilde;  // A(t) > 0
  double d;        // D(t) > A(t)
};

RosenauCoefficients rosenau_coefficients(double mu, double t);

/// Pressure in all gauges at one point: w cos^2 psi = v, u = 1/v, U = 1/w.
struct GaugeTriple {
  double x;
  double psi;
  double v;
  double w;
  double u;
  double U;
};

class AncientSolution {
 public:
  static AncientSolution contracting_sphere();
  static AncientSolution rosenau(double mu, double x0 = 0.0);

  Kind kind() const noexcept { return kind_; }
  double mu() const noexcept { return mu_; }
  double x0() const noexcept { return x0_; }

  // Sphere gauge. All of these require t < 0.
  double v(double psi, double t) const;
  double v_t(double psi, double t) const;
  double v_psi(double psi, double t) const;
  double v_psipsi(double psi, double t) const;
  double v_psipsipsi(double psi, double t) const;
  /// Scalar curvature R = v_t / v.
  double R(double psi, double t) const;

  // Cylinder gauge.
  double w(double x, double t) const;
  double w_t(double x, double t) const;

  GaugeTriple gauges(double x, double t) const;

  /// v(psi_j, t) at every latitude node.
  std::vector<double> sample_v(const grid::PsiGrid& g, double t) const;
  std::vector<double> sample_R(const grid::PsiGrid& g, double t) const;
  std::vector<double> sample_w(const grid::CylinderWindow& window, double t) const;

  /// Largest scalar curvature over the sphere (attained at the poles).
  double max_R(double t) const;

 private:
  AncientSolution(Kind kind, double mu, double x0) : kind_(kind), mu_(mu), x0_(x0) {}

  Kind kind_;
  double mu_;
  double x0_;
};

double sphere_v(double t);
double rosenau_v(double psi, double t, double mu);
double rosenau_w(double x, double t, double mu, double x0 = 0.0);
double rosenau_R(double psi, double t, double mu);

/// Backward limit C cos^2 psi of an ancient solution as t -> -inf.
struct BackwardLimit {
  double C;

  double v(double psi) const;
  double v_psi(double psi) const;
  double v_psipsi(double psi) const;
  /// v Lap v - |grad v|^2 + 2 v^2 evaluated with exact derivatives.
  double steady_residual(double psi) const;
  std::vector<double> sample(const grid::PsiGrid& g) const;
};

BackwardLimit backward_limit(const AncientSolution& sol);

/// |t| * max R(., t). Bounded (type I) for the sphere, growing like 4 mu |t|
/// (type II) for Rosenau.
double type_ratio(const AncientSolution& sol, double t);

}  // namespace ancient::exact
