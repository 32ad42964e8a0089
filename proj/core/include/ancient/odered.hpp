#pragma once

// Radial ancient solutions with Q_x = 0 have the cylinder-gauge form
//     w(x, t) = a(t) e^{2x} + b(t) e^{-2x} + d(t),
// and the pressure equation reduces to
//     a' = 4 a d,   b' = 4 b d,   d' = 16 a b,
// with d^2 - 4ab conserved. Rosenau is the family a, b > 0.

#include <span>
#include <string>
#include <vector>

namespace ancient::ode {

struct OdeState {
  double a = 0.0;
  double b = 0.0;
  double d = 0.0;
  double t = 0.0;

  double conserved() const noexcept { return d * d - 4.0 * a * b; }
};

struct Derivative {
  double da, db, dd;
};

Derivative rhs(const OdeState& s) noexcept;

enum class OdeStatus { Completed, BlowUp };

const char* to_string(OdeStatus s);

struct Trajectory {
  std::vector<OdeState> states;  // every accepted step, starting with s0
  OdeStatus status = OdeStatus::Completed;
  std::string detail;
};

struct OdeTolerances {
  double rtol = 1e-10;
  double atol = 1e-14;
  double blow_up = 1e12;  // |a|, |b| or |d| above this ends the run
};

/// Adaptive Dormand-Prince 5(4) from s0.t to t1 > s0.t.
Trajectory integrate(const OdeState& s0, double t1, const OdeTolerances& tol = {});

/// a = A / (2 lambda), b = lambda A / 2, d = D with lambda = e^{2 x0},
/// A = -mu csch(4 mu t), D = -mu coth(4 mu t).
OdeState closed_form(double mu, double x0, double t);

enum class FitLabel { Rosenau, Cylinder, NotInFamily };

const char* to_string(FitLabel label);

struct FitReport {
  double mu = 0.0;
  double x0 = 0.0;  // NaN unless label == Rosenau
  double residual = 0.0;
  double conserved = 0.0;  // d^2 - 4ab of the fit
  double a = 0.0, b = 0.0, d = 0.0;
  FitLabel label = FitLabel::NotInFamily;
};

/// Least squares in the basis {e^{2x}, e^{-2x}, 1} (columns scaled by their
/// max), then mu = sqrt(d^2 - 4ab) and x0 = log(b / a) / 4. A profile whose
/// exponential part is negligible against d is labelled Cylinder (mu = d).
FitReport fit_rosenau(std::span<const double> x, std::span<const double> w);

}  // namespace ancient::ode
