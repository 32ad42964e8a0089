#pragma once

// Isoperimetric ratio of a radial metric g = v^{-1} (dpsi^2 + cos^2 psi dtheta^2)
// restricted to latitude circles:
//     I_lat = min_psi L^2 (1/A1 + 1/A2) / (4 pi),
// an upper bound for the infimum over all dividing curves.

#include <span>
#include <vector>

#include "ancient/grid.hpp"

namespace ancient::iso {

struct IsoResult {
  double psi_star = 0.0;
  double L = 0.0;
  double A1 = 0.0;  // south of the circle
  double A2 = 0.0;  // north of the circle
  double I = 0.0;
  double kappa = 0.0;
  double stationarity_residual = 0.0;  // |2 kappa - L (1/A1 - 1/A2)|
  bool tie = false;                    // every latitude gives the same ratio
};

struct LatitudeProfile {
  std::vector<double> psi, L, A1, A2, ratio;
  double total_area = 0.0;
};

/// Sphere gauge. L = 2 pi cos psi / sqrt v and A1 = 2 pi int_{-pi/2}^{psi} cos / v,
/// from the Chebyshev interpolant of 1/v in sin psi.
LatitudeProfile latitude_profile(const grid::PsiGrid& g, std::span<const double> v);
IsoResult iso_ratio(const grid::PsiGrid& g, std::span<const double> v);
/// sqrt(v) L'(psi) / L, evaluated on the interpolant.
double geodesic_kappa(const grid::PsiGrid& g, std::span<const double> v, double psi);

/// Cylinder gauge, w = v sec^2 psi sampled on a window that covers both tips.
/// L = 2 pi / sqrt w, A1 = 2 pi int_{-inf}^{x} dx / w with exponential tails
/// beyond the window, kappa = -w_x / (2 sqrt w).
LatitudeProfile latitude_profile(const grid::CylinderWindow& window, std::span<const double> w);
IsoResult iso_ratio(const grid::CylinderWindow& window, std::span<const double> w);

struct IsoSample {
  double t;
  IsoResult iso;
};

struct HamiltonReport {
  std::vector<double> t, I, dI_dt, slack_simple, slack_full;
  double min_slack_simple = 0.0;  // min of I' - I (1 - I^2) / |t|
  double min_slack_full = 0.0;    // min of I' - 4 pi (A1^2 + A2^2) / (A1 A2 (A1 + A2)) I (1 - I^2)
  double dI_dt_scale = 0.0;       // max |I'|
  bool gate_fired = false;        // some I exceeded 1 + 1e-6
};

/// Finite-difference I'(t) at interior samples against both lower bounds.
/// Needs at least three samples with increasing t < 0.
HamiltonReport hamilton_inequality_check(std::span<const IsoSample> samples);

}  // namespace ancient::iso
