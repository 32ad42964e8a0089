#pragma once

// Scenario configuration, trajectory orchestration and persistence.
//
// A scenario is a flat JSON object; unknown keys are rejected by name.
// Running one produces diagnostics records, oracle errors when the initial
// datum is a closed form, and a list of named pass/fail checks.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ancient/diagnostics.hpp"
#include "ancient/exact.hpp"
#include "ancient/flow2d.hpp"
#include "ancient/grid.hpp"
#include "ancient/odered.hpp"

namespace ancient::runner {

/// Initial datum, written "sphere", "rosenau:mu=1,x0=0", "steady:C=1" or
/// "perturbed:base=rosenau,mu=1,eps=0.05,m=1[,phase=random]".
struct InitSpec {
  enum class Kind { Sphere, Rosenau, Steady, Perturbed };
  Kind kind = Kind::Rosenau;
  exact::Kind base = exact::Kind::Rosenau;  // Perturbed only
  double mu = 1.0;
  double x0 = 0.0;
  double C = 1.0;
  double eps = 0.0;
  int m = 0;
  bool random_phase = false;

  /// Closed form of the unperturbed datum, if there is one.
  std::optional<exact::AncientSolution> oracle() const;
  std::string to_string() const;
};

InitSpec parse_init(const std::string& text);

struct Scenario {
  std::string name = "run";
  InitSpec init;
  std::string solver = "radial";  // radial | 2d
  int n = 256;
  int m = 64;
  double t_start = -2.0;
  double t_end = -1.0;
  double observe_every = 0.05;
  bool detect_extinction = false;  // allow t_end >= 0 and stop at v_cap
  double cfl_sigma = 0.2;
  double v_cap = 1e6;
  long max_steps = 50'000'000;
  bool polar_filter = true;
  double filter_threshold = 1.0;
  bool diag_harnack = true;
  bool diag_F = true;
  bool diag_iso = false;
  std::vector<double> profile_times;
  std::uint64_t seed = 0;
  std::string output_dir;
};

/// Throws invalid_argument naming the offending key or value.
void validate(const Scenario& s);
Scenario parse_scenario(const std::string& json_text);
std::string scenario_to_json(const Scenario& s);

/// Radial or 2-D initial field; the perturbation phase comes from a
/// mt19937_64 seeded with s.seed when random_phase is set.
std::vector<double> initial_radial(const Scenario& s);
grid::Field2D initial_2d(const Scenario& s);
double perturbation_phase(const Scenario& s);

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct ProfileSnapshot {
  double t;
  std::vector<double> psi, v;
};

struct RunReport {
  Scenario scenario;
  std::string status;  // completed | extinct | failed
  std::vector<diagnostics::DiagnosticsRecord> records;
  std::vector<double> oracle_errors;  // per record, empty without an oracle
  std::optional<double> estimated_extinction;
  double last_good_t = 0.0;
  long steps = 0;
  std::string failure;
  double phase = 0.0;
  std::vector<ProfileSnapshot> profiles;
  std::vector<Check> checks;
};

RunReport run(const Scenario& s);

/// Checks derived from the records: oracle tracking, Gauss-Bonnet, area law,
/// Lyapunov identity and sign, Harnack, F decay, theta-mass decay.
std::vector<Check> evaluate_checks(const RunReport& r);

// Persistence: records.csv, report.json, profile.csv in one directory.
std::string records_csv(const RunReport& r);
std::string report_json(const RunReport& r);
std::string profile_csv(const RunReport& r);
void persist(const RunReport& r, const std::filesystem::path& dir);

/// Relative paths are placed under $ANCIENT_OUTPUT_ROOT when it is set.
std::filesystem::path resolve_output(const std::string& dir);

/// One-snapshot diagnostics of a closed form as JSON.
std::string diagnose_json(const InitSpec& init, double t, int n);

/// Isoperimetric profile table (CSV) and summary (JSON) of a closed form.
struct IsoOutput {
  std::string table_csv;
  std::string summary_json;
};
IsoOutput iso_closed_form(const InitSpec& init, double t, int n, bool cylinder, double half_width, int samples);

/// Integrate the reduced ODE from the closed form at t0 to t1 and compare.
std::string ode_json(double mu, double x0, double t0, double t1);

/// Fit a stored profile: CSV with columns (x, w), or (t, psi, v) as written
/// by persist (the snapshot nearest `t` when given, else the last one).
std::string fit_json(const std::filesystem::path& profile, std::optional<double> t, double x_min,
                     double x_max, int samples);

/// Merge report.json files into a summary with every named check.
std::string merge_reports(const std::vector<std::filesystem::path>& reports);

std::string fit_report_json(const ode::FitReport& f);

}  // namespace ancient::runner
