// ancientlab: command line front end to the ancient core library.
//
//   ancientlab simulate --init rosenau:mu=1 --t0 -2 --t1 -1 --n 256 --out runs/r1
//   ancientlab diagnose --init sphere --t -1 --n 128
//   ancientlab iso --init rosenau:mu=1 --t -10 --cylinder
//   ancientlab ode --mu 1 --t0 -3 --t1 -1
//   ancientlab fit --profile runs/r1/profile.csv
//   ancientlab report runs/r1 runs/r2
//
// Results go to stdout as JSON; errors go to stderr as {"error", "detail"}.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ancient/error.hpp"
#include "ancient/runner.hpp"

namespace {

using json = nlohmann::ordered_json;
namespace runner = ancient::runner;

int report_error(const std::string& kind, const std::string& detail, int code) {
  std::cerr << json{{"error", kind}, {"detail", detail}}.dump() << '\n';
  return code;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ancient::Error("io_error", "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ancient::Error("io_error", "cannot open '" + path + "' for writing");
  out << text;
  if (!out.flush()) throw ancient::Error("io_error", "write to '" + path + "' failed");
}

struct SimulateFlags {
  std::vector<std::string> configs;
  std::optional<std::string> name, init, solver, out;
  std::optional<int> n, m;
  std::optional<double> t0, t1, every;
  std::optional<std::uint64_t> seed;
  bool extinction = false, iso = false, no_harnack = false, no_filter = false;
  std::vector<double> profile_times;
};

// Command line flags overlay the config file; both go through parse_scenario
// so unknown keys and bad values are rejected in one place.
runner::Scenario build_scenario(const std::string& config_text, const SimulateFlags& f) {
  json j = config_text.empty() ? json::object() : json::parse(config_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ancient::invalid_argument("config is not a JSON object");
  }
  if (f.name) j["name"] = *f.name;
  if (f.init) j["init"] = *f.init;
  if (f.solver) j["solver"] = *f.solver;
  if (f.n) j["n"] = *f.n;
  if (f.m) j["m"] = *f.m;
  if (f.t0) j["t_start"] = *f.t0;
  if (f.t1) j["t_end"] = *f.t1;
  if (f.every) j["observe_every"] = *f.every;
  if (f.seed) j["seed"] = *f.seed;
  if (f.out) j["output_dir"] = *f.out;
  if (f.extinction) j["detect_extinction"] = true;
  if (f.iso) j["diag_iso"] = true;
  if (f.no_harnack) j["diag_harnack"] = false;
  if (f.no_filter) j["polar_filter"] = false;
  if (!f.profile_times.empty()) j["profile_times"] = f.profile_times;
  auto s = runner::parse_scenario(j.dump());
  if (s.output_dir.empty()) s.output_dir = "runs/" + s.name;
  return s;
}

json run_one(const runner::Scenario& s) {
  const auto report = runner::run(s);
  const auto dir = runner::resolve_output(s.output_dir);
  runner::persist(report, dir);
  bool all = true;
  for (const auto& c : report.checks) all = all && c.pass;
  double worst = 0.0;
  for (double e : report.oracle_errors) worst = std::max(worst, e);
  json j{{"name", s.name},      {"status", report.status},  {"steps", report.steps},
         {"records", report.records.size()}, {"output", dir.string()}, {"all_pass", all}};
  if (!report.oracle_errors.empty()) j["oracle_max_rel_error"] = worst;
  if (report.estimated_extinction) j["estimated_extinction"] = *report.estimated_extinction;
  return j;
}

int simulate(const SimulateFlags& f) {
  std::vector<runner::Scenario> scenarios;
  if (f.configs.empty()) {
    scenarios.push_back(build_scenario("", f));
  } else {
    for (const auto& path : f.configs) scenarios.push_back(build_scenario(slurp(path), f));
    if (scenarios.size() > 1 && f.out) {
      throw ancient::invalid_argument("--out cannot be shared by several configs");
    }
  }
  // One worker per scenario; each writes only its own directory.
  std::vector<std::future<json>> jobs;
  for (const auto& s : scenarios) jobs.push_back(std::async(std::launch::async, run_one, s));
  json out = json::array();
  for (auto& job : jobs) out.push_back(job.get());
  std::cout << (out.size() == 1 ? out[0] : out).dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ancient solutions of the Ricci flow on surfaces: solvers and diagnostics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ancientlab 0.1.0");

  SimulateFlags sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run scenarios and write records.csv, report.json");
  simulate_cmd->add_option("--config", sim.configs, "Scenario JSON file (repeat to run several in parallel)");
  simulate_cmd->add_option("--name", sim.name, "Scenario name");
  simulate_cmd->add_option("--init", sim.init, "Initial datum, e.g. rosenau:mu=1,x0=0");
  simulate_cmd->add_option("--solver", sim.solver, "radial or 2d");
  simulate_cmd->add_option("--n", sim.n, "Latitude cells");
  simulate_cmd->add_option("--m", sim.m, "Longitude cells (2d)");
  simulate_cmd->add_option("--t0", sim.t0, "Start time");
  simulate_cmd->add_option("--t1", sim.t1, "End time");
  simulate_cmd->add_option("--every", sim.every, "Observation cadence");
  simulate_cmd->add_option("--seed", sim.seed, "Perturbation seed");
  simulate_cmd->add_option("--out", sim.out, "Output directory");
  simulate_cmd->add_option("--profile-times", sim.profile_times, "Times for profile.csv snapshots");
  simulate_cmd->add_flag("--extinction", sim.extinction, "Run until extinction");
  simulate_cmd->add_flag("--iso", sim.iso, "Record isoperimetric diagnostics");
  simulate_cmd->add_flag("--no-harnack", sim.no_harnack, "Skip the Harnack residual");
  simulate_cmd->add_flag("--no-filter", sim.no_filter, "Disable the polar filter (2d)");

  std::string init = "rosenau:mu=1";
  double t = -1.0;
  int n = 256;

  auto* diagnose_cmd = app.add_subcommand("diagnose", "Diagnostics of a closed form at one time");
  diagnose_cmd->add_option("--init", init, "sphere, rosenau:mu=..,x0=.. or steady:C=..");
  diagnose_cmd->add_option("--t", t, "Time (negative)");
  diagnose_cmd->add_option("--n", n, "Latitude cells");

  bool cylinder = false;
  std::optional<double> half_width;
  int samples = 4001;
  std::optional<std::string> table;
  auto* iso_cmd = app.add_subcommand("iso", "Isoperimetric profile of a closed form");
  iso_cmd->add_option("--init", init, "Initial datum");
  iso_cmd->add_option("--t", t, "Time (negative)");
  iso_cmd->add_option("--n", n, "Latitude cells (sphere route)");
  iso_cmd->add_flag("--cylinder", cylinder, "Integrate in the cylinder gauge");
  iso_cmd->add_option("--half-width", half_width, "Cylinder window half width");
  iso_cmd->add_option("--samples", samples, "Cylinder window samples");
  iso_cmd->add_option("--table", table, "Write the profile table CSV here");

  double mu = 1.0, x0 = 0.0, t0 = -3.0, t1 = -1.0;
  auto* ode_cmd = app.add_subcommand("ode", "Integrate the reduced ODE and compare with the closed form");
  ode_cmd->add_option("--mu", mu, "Rosenau parameter");
  ode_cmd->add_option("--x0", x0, "Rosenau offset");
  ode_cmd->add_option("--t0", t0, "Start time");
  ode_cmd->add_option("--t1", t1, "End time");

  std::string profile;
  std::optional<double> fit_t;
  double x_min = -4.0, x_max = 4.0;
  int fit_samples = 401;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a stored profile to the Rosenau family");
  fit_cmd->add_option("--profile", profile, "CSV with x,w or t,psi,v columns")->required();
  fit_cmd->add_option("--t", fit_t, "Snapshot time in a t,psi,v file");
  fit_cmd->add_option("--x-min", x_min, "Window start");
  fit_cmd->add_option("--x-max", x_max, "Window end");
  fit_cmd->add_option("--samples", fit_samples, "Window samples");

  std::vector<std::string> paths;
  std::optional<std::string> report_out;
  auto* report_cmd = app.add_subcommand("report", "Merge run outputs into one pass/fail summary");
  report_cmd->add_option("paths", paths, "Run directories or report.json files")->required();
  report_cmd->add_option("--out", report_out, "Write the summary here as well");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), 2);
  }

  try {
    if (*simulate_cmd) return simulate(sim);
    if (*diagnose_cmd) {
      std::cout << runner::diagnose_json(runner::parse_init(init), t, n) << '\n';
    } else if (*iso_cmd) {
      const auto spec = runner::parse_init(init);
      const double hw = half_width.value_or(2.0 * spec.mu * std::abs(t) + 15.0);
      const auto out = runner::iso_closed_form(spec, t, n, cylinder, hw, samples);
      if (table) write_text(*table, out.table_csv);
      std::cout << out.summary_json << '\n';
    } else if (*ode_cmd) {
      std::cout << runner::ode_json(mu, x0, t0, t1) << '\n';
    } else if (*fit_cmd) {
      std::cout << runner::fit_json(profile, fit_t, x_min, x_max, fit_samples) << '\n';
    } else if (*report_cmd) {
      std::vector<std::filesystem::path> ps(paths.begin(), paths.end());
      const auto summary = runner::merge_reports(ps);
      if (report_out) write_text(*report_out, summary);
      std::cout << summary;
    }
  } catch (const ancient::Error& e) {
    return report_error(e.kind(), e.what(), 1);
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), 1);
  }
  return 0;
}
