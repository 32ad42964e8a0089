#pragma once

// Monitored quantities of a pressure field v on the round sphere, with
// da = cos(psi) dpsi dtheta and |grad v|^2 = v_psi^2 + sec^2(psi) v_theta^2.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ancient/exact.hpp"
#include "ancient/flow1d.hpp"
#include "ancient/flow2d.hpp"
#include "ancient/grid.hpp"
#include "ancient/isoperimetric.hpp"

namespace ancient::diagnostics {

using flow1d::RadialState;
using flow2d::SphereState2D;

/// R = Lap v - |grad v|^2 / v + 2 v. Rejects v <= 0.
std::vector<double> scalar_curvature(const grid::PsiGrid& g, std::span<const double> v);
std::vector<double> scalar_curvature(const RadialState& s);
grid::Field2D scalar_curvature(const SphereState2D& s);

/// (v_next - v_prev) / (2 delta v_mid), the cross-check for scalar_curvature.
std::vector<double> temporal_curvature(std::span<const double> v_prev, std::span<const double> v_mid,
                                       std::span<const double> v_next, double delta);

/// int u da with u = 1/v.
double area(const RadialState& s);
double area(const SphereState2D& s);

/// int R u da (8 pi by Gauss-Bonnet).
double total_curvature(const RadialState& s);
double total_curvature(const SphereState2D& s);

/// J = int (|grad v|^2 / v - 4 v) da.
double lyapunov_J(const RadialState& s);
double lyapunov_J(const SphereState2D& s);

/// -2 int v_t^2 / v^2 da - int |grad v|^2 v_t / v^2 da, v_t from the rhs.
double lyapunov_rate(const RadialState& s);
double lyapunov_rate(const SphereState2D& s);

/// Both right-hand terms of lyapunov_rate, each <= 0 whenever v_t >= 0.
struct LyapunovTerms {
  double dissipation;  // -2 int v_t^2 / v^2 da
  double gradient;     // -int |grad v|^2 v_t / v^2 da
};
LyapunovTerms lyapunov_terms(const RadialState& s);

/// min over nodes of Lap R + R^2 / v - |grad R|^2 / R. Rejects R <= 0.
double harnack_residual(const grid::PsiGrid& g, std::span<const double> v, std::span<const double> R);
double harnack_residual(const RadialState& s);
double harnack_residual(const SphereState2D& s);

/// Q_x in the cylinder gauge written on the sphere:
/// G = (-cos + 2 sec + sin tan) v_psi + 3 sin v_psipsi + cos v_psipsipsi, F = G^2.
std::vector<double> F_quantity(const RadialState& s);
double sup_F(const RadialState& s);
/// Rejects states whose theta-variation exceeds 1e-12.
double sup_F(const SphereState2D& s);

/// sup (|Lap v| + |grad v|^2 / v).
double grad_bound(const RadialState& s);
double grad_bound(const SphereState2D& s);

/// int int |u_theta| cos(psi) dpsi dtheta, zero for radial fields.
double theta_mass(const SphereState2D& s);

enum class Cap { North, South };

/// int R u da over psi > psi0 (North) or psi < -psi0 (South) for a Rosenau
/// solution, by adaptive Gauss-Kronrod in the cylinder gauge over
/// [x(psi0), x0 + 2 mu |t| + 20]. Throws when the neglected tail exceeds 1e-8.
double cap_curvature(const exact::AncientSolution& sol, double psi0, double t, Cap cap = Cap::North);

struct DiagnosticsRecord {
  double t = 0.0;
  double area = 0.0;
  double d_area_dt = 0.0;
  double total_curvature = 0.0;
  double R_min = 0.0;
  double R_max = 0.0;
  double type_ratio = 0.0;
  double J = 0.0;
  double dJ_dt_measured = 0.0;
  double dJ_dt_formula = 0.0;
  double harnack_min = 0.0;
  double grad_bound = 0.0;
  double sup_F = 0.0;
  double theta_mass = 0.0;
  std::optional<iso::IsoResult> iso;
};

struct RecordOptions {
  bool harnack = true;
  bool F = true;
  bool iso = false;
};

DiagnosticsRecord make_record(const RadialState& s, const RecordOptions& opts = {});
DiagnosticsRecord make_record(const SphereState2D& s, const RecordOptions& opts = {});

/// Fill d_area_dt and dJ_dt_measured by (nonuniform) central differences in
/// t, one-sided at the ends. Fewer than two records leaves them NaN.
void fill_rates(std::vector<DiagnosticsRecord>& records);

std::vector<std::string> csv_columns(bool with_iso);
std::vector<double> csv_values(const DiagnosticsRecord& r, bool with_iso);

}  // namespace ancient::diagnostics
