#include "ancient/runner.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "ancient/error.hpp"
#include "ancient/flow1d.hpp"
#include "ancient/isoperimetric.hpp"

namespace ancient::runner {

namespace {

using json = nlohmann::ordered_json;

constexpr double kEightPi = 8.0 * std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(value)) {
    throw invalid_argument("init parameter '" + key + "' needs a finite number, got '" + text + "'");
  }
  return value;
}

std::map<std::string, std::string> parse_params(const std::string& body) {
  std::map<std::string, std::string> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw invalid_argument("init parameter '" + item + "' must look like key=value");
    }
    const auto key = item.substr(0, eq);
    if (out.count(key)) throw invalid_argument("init parameter '" + key + "' given twice");
    out[key] = item.substr(eq + 1);
  }
  return out;
}

void reject_unknown(const std::map<std::string, std::string>& params,
                    std::initializer_list<const char*> allowed, const std::string& kind) {
  for (const auto& [key, value] : params) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw invalid_argument("unknown init parameter '" + key + "' for " + kind);
    }
  }
}

bool power_of_two_in_range(int n) { return n >= 32 && n <= 1024 && std::has_single_bit(static_cast<unsigned>(n)); }

double max_relative_error(std::span<const double> v, std::span<const double> exact) {
  double worst = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) worst = std::max(worst, std::fabs(v[j] - exact[j]) / std::fabs(exact[j]));
  return worst;
}

double max_relative_error(const grid::Field2D& v, std::span<const double> exact) {
  double worst = 0.0;
  for (int j = 0; j < v.rows(); ++j) {
    const double e = exact[static_cast<std::size_t>(j)];
    for (int k = 0; k < v.cols(); ++k) worst = std::max(worst, std::fabs(v(j, k) - e) / std::fabs(e));
  }
  return worst;
}

std::vector<double> exact_profile(const InitSpec& init, const grid::PsiGrid& g, double t) {
  if (init.kind == InitSpec::Kind::Steady) return exact::BackwardLimit{init.C}.sample(g);
  return init.oracle()->sample_v(g, t);
}

bool has_oracle(const InitSpec& init) { return init.kind != InitSpec::Kind::Perturbed; }

// Harnack floor 1e-4 at n = 256, scaling like h^2.
double harnack_tolerance(int n) {
  const double r = 256.0 / n;
  return 1e-4 * r * r;
}

}  // namespace

std::optional<exact::AncientSolution> InitSpec::oracle() const {
  switch (kind) {
    case Kind::Sphere: return exact::AncientSolution::contracting_sphere();
    case Kind::Rosenau: return exact::AncientSolution::rosenau(mu, x0);
    case Kind::Steady: return std::nullopt;
    case Kind::Perturbed:
      return base == exact::Kind::Rosenau ? exact::AncientSolution::rosenau(mu, x0)
                                          : exact::AncientSolution::contracting_sphere();
  }
  return std::nullopt;
}

std::string InitSpec::to_string() const {
  switch (kind) {
    case Kind::Sphere: return "sphere";
    case Kind::Rosenau: return "rosenau:mu=" + format(mu) + ",x0=" + format(x0);
    case Kind::Steady: return "steady:C=" + format(C);
    case Kind::Perturbed: {
      std::string s = "perturbed:base=";
      s += base == exact::Kind::Rosenau ? "rosenau,mu=" + format(mu) + ",x0=" + format(x0) : "sphere";
      s += ",eps=" + format(eps) + ",m=" + std::to_string(m);
      if (random_phase) s += ",phase=random";
      return s;
    }
  }
  return "";
}

InitSpec parse_init(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const auto params = parse_params(colon == std::string::npos ? "" : text.substr(colon + 1));
  auto num = [&](const char* key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : parse_number(key, it->second);
  };
  InitSpec spec;
  if (kind == "sphere") {
    reject_unknown(params, {}, kind);
    spec.kind = InitSpec::Kind::Sphere;
  } else if (kind == "rosenau") {
    reject_unknown(params, {"mu", "x0"}, kind);
    spec.kind = InitSpec::Kind::Rosenau;
    spec.mu = num("mu", 1.0);
    spec.x0 = num("x0", 0.0);
  } else if (kind == "steady") {
    reject_unknown(params, {"C"}, kind);
    spec.kind = InitSpec::Kind::Steady;
    spec.C = num("C", 1.0);
  } else if (kind == "perturbed") {
    reject_unknown(params, {"base", "mu", "x0", "eps", "m", "phase"}, kind);
    spec.kind = InitSpec::Kind::Perturbed;
    const auto base = params.count("base") ? params.at("base") : std::string("rosenau");
    if (base == "rosenau") {
      spec.base = exact::Kind::Rosenau;
    } else if (base == "sphere") {
      spec.base = exact::Kind::ContractingSphere;
    } else {
      throw invalid_argument("perturbed base must be 'rosenau' or 'sphere', got '" + base + "'");
    }
    spec.mu = num("mu", 1.0);
    spec.x0 = num("x0", 0.0);
    spec.eps = num("eps", 0.05);
    const double m = num("m", 1.0);
    if (m != std::floor(m) || m < 0.0 || m > 64.0) {
      throw invalid_argument("perturbation mode m must be an integer in [0, 64]");
    }
    spec.m = static_cast<int>(m);
    if (params.count("phase")) {
      if (params.at("phase") != "random" && params.at("phase") != "zero") {
        throw invalid_argument("perturbation phase must be 'random' or 'zero'");
      }
      spec.random_phase = params.at("phase") == "random";
    }
  } else {
    throw invalid_argument("unknown initial datum '" + kind + "' (sphere, rosenau, steady, perturbed)");
  }
  if (!(spec.mu > 0.0)) throw invalid_argument("Rosenau parameter mu must be positive");
  if (!(spec.C > 0.0)) throw invalid_argument("steady constant C must be positive");
  if (!(std::fabs(spec.eps) <= 0.1)) throw invalid_argument("perturbation amplitude must satisfy |eps| <= 0.1");
  return spec;
}

void validate(const Scenario& s) {
  if (s.name.empty()) throw invalid_argument("name: must not be empty");
  if (s.solver != "radial" && s.solver != "2d") throw invalid_argument("solver: must be 'radial' or '2d'");
  if (!power_of_two_in_range(s.n)) throw invalid_argument("n: must be a power of two in [32, 1024]");
  if (s.solver == "2d" && !power_of_two_in_range(s.m)) {
    throw invalid_argument("m: must be a power of two in [32, 1024]");
  }
  if (!std::isfinite(s.t_start) || !(s.t_start < 0.0)) throw invalid_argument("t_start: must be negative");
  if (!std::isfinite(s.t_end) || !(s.t_end > s.t_start)) throw invalid_argument("t_end: must exceed t_start");
  if (!s.detect_extinction && !(s.t_end < 0.0)) {
    throw invalid_argument("t_end: must be negative unless detect_extinction is set");
  }
  if (!(s.observe_every >= 0.0) || !std::isfinite(s.observe_every)) {
    throw invalid_argument("observe_every: must be non-negative");
  }
  if (!(s.cfl_sigma > 0.0) || s.cfl_sigma > 1.0) throw invalid_argument("cfl_sigma: must lie in (0, 1]");
  if (!(s.v_cap > 0.0)) throw invalid_argument("v_cap: must be positive");
  if (s.max_steps <= 0) throw invalid_argument("max_steps: must be positive");
  if (!(s.filter_threshold > 0.0)) throw invalid_argument("filter_threshold: must be positive");
  if (s.solver == "radial" && s.init.kind == InitSpec::Kind::Perturbed && s.init.m != 0) {
    throw invalid_argument("init: the radial solver only takes m = 0 perturbations");
  }
}

Scenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw invalid_argument("config must be a JSON object");
  Scenario s;
  auto get = [&](const std::string& key, auto& field) {
    try {
      j.at(key).get_to(field);
    } catch (const json::exception&) {
      throw invalid_argument(key + ": has the wrong type");
    }
  };
  for (const auto& [key, value] : j.items()) {
    if (key == "name") get(key, s.name);
    else if (key == "init") {
      std::string text;
      get(key, text);
      s.init = parse_init(text);
    } else if (key == "solver") get(key, s.solver);
    else if (key == "n") get(key, s.n);
    else if (key == "m") get(key, s.m);
    else if (key == "t_start") get(key, s.t_start);
    else if (key == "t_end") get(key, s.t_end);
    else if (key == "observe_every") get(key, s.observe_every);
    else if (key == "detect_extinction") get(key, s.detect_extinction);
    else if (key == "cfl_sigma") get(key, s.cfl_sigma);
    else if (key == "v_cap") get(key, s.v_cap);
    else if (key == "max_steps") get(key, s.max_steps);
    else if (key == "polar_filter") get(key, s.polar_filter);
    else if (key == "filter_threshold") get(key, s.filter_threshold);
    else if (key == "diag_harnack") get(key, s.diag_harnack);
    else if (key == "diag_F") get(key, s.diag_F);
    else if (key == "diag_iso") get(key, s.diag_iso);
    else if (key == "profile_times") get(key, s.profile_times);
    else if (key == "seed") get(key, s.seed);
    else if (key == "output_dir") get(key, s.output_dir);
    else throw invalid_argument("unknown config key '" + key + "'");
  }
  validate(s);
  return s;
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["init"] = s.init.to_string();
  j["solver"] = s.solver;
  j["n"] = s.n;
  j["m"] = s.m;
  j["t_start"] = s.t_start;
  j["t_end"] = s.t_end;
  j["observe_every"] = s.observe_every;
  j["detect_extinction"] = s.detect_extinction;
  j["cfl_sigma"] = s.cfl_sigma;
  j["v_cap"] = s.v_cap;
  j["max_steps"] = s.max_steps;
  j["polar_filter"] = s.polar_filter;
  j["filter_threshold"] = s.filter_threshold;
  j["diag_harnack"] = s.diag_harnack;
  j["diag_F"] = s.diag_F;
  j["diag_iso"] = s.diag_iso;
  j["profile_times"] = s.profile_times;
  j["seed"] = s.seed;
  j["output_dir"] = s.output_dir;
  return j.dump(2);
}

double perturbation_phase(const Scenario& s) {
  if (s.init.kind != InitSpec::Kind::Perturbed || !s.init.random_phase) return 0.0;
  std::mt19937_64 rng(s.seed);
  // 53 random bits mapped onto [0, 2 pi).
  return 2.0 * std::numbers::pi * std::ldexp(static_cast<double>(rng() >> 11), -53);
}

std::vector<double> initial_radial(const Scenario& s) {
  const grid::PsiGrid g(s.n);
  if (s.init.kind == InitSpec::Kind::Steady) return exact::BackwardLimit{s.init.C}.sample(g);
  auto v = s.init.oracle()->sample_v(g, s.t_start);
  if (s.init.kind == InitSpec::Kind::Perturbed) {
    if (s.init.m != 0) throw invalid_argument("radial initial data only take m = 0 perturbations");
    const auto c = g.cos_psi();
    for (std::size_t j = 0; j < v.size(); ++j) v[j] *= 1.0 + s.init.eps * c[j] * c[j];
  }
  return v;
}

grid::Field2D initial_2d(const Scenario& s) {
  const grid::PsiGrid pg(s.n);
  const grid::ThetaGrid tg(s.m);
  Scenario base = s;
  if (s.init.kind == InitSpec::Kind::Perturbed) {
    base.init.eps = 0.0;
    base.init.m = 0;
  }
  const auto radial = initial_radial(base);
  auto v = grid::Field2D::from_radial(radial, s.m);
  if (s.init.kind == InitSpec::Kind::Perturbed) {
    const double phase = perturbation_phase(s);
    const auto c = pg.cos_psi();
    for (int j = 0; j < pg.size(); ++j) {
      const double c2 = c[static_cast<std::size_t>(j)] * c[static_cast<std::size_t>(j)];
      for (int k = 0; k < tg.size(); ++k) {
        v(j, k) *= 1.0 + s.init.eps * std::cos(s.init.m * (tg.node(k) - phase)) * c2;
      }
    }
  }
  return v;
}

RunReport run(const Scenario& s) {
  validate(s);
  RunReport report;
  report.scenario = s;
  report.phase = perturbation_phase(s);
  const grid::PsiGrid pg(s.n);
  const diagnostics::RecordOptions opts{s.diag_harnack, s.diag_F, s.diag_iso};
  const bool oracle = has_oracle(s.init);
  std::size_t next_profile = 0;
  auto profile_times = s.profile_times;
  std::sort(profile_times.begin(), profile_times.end());

  auto take_profile = [&](double t, std::span<const double> v) {
    while (next_profile < profile_times.size() && t >= profile_times[next_profile] - 1e-12) {
      report.profiles.push_back({t, {pg.nodes().begin(), pg.nodes().end()}, {v.begin(), v.end()}});
      ++next_profile;
    }
  };

  flow1d::Status status;
  if (s.solver == "radial") {
    flow1d::RadialState state{pg, initial_radial(s), s.t_start};
    const flow1d::StepControls controls{s.cfl_sigma, s.v_cap, s.max_steps};
    auto observer = [&](const flow1d::RadialState& st) {
      report.records.push_back(diagnostics::make_record(st, opts));
      if (oracle && st.t < 0.0) report.oracle_errors.push_back(max_relative_error(st.v, exact_profile(s.init, pg, st.t)));
      take_profile(st.t, st.v);
    };
    auto result = flow1d::evolve(std::move(state), s.t_end, controls, observer, s.observe_every);
    status = result.status;
    report.steps = result.steps;
    report.last_good_t = result.state.t;
    report.estimated_extinction = result.extinction_time;
    report.failure = result.failure;
  } else {
    const grid::ThetaGrid tg(s.m);
    flow2d::SphereState2D state{pg, tg, initial_2d(s), s.t_start};
    const flow2d::StepControls2D controls{s.cfl_sigma, s.v_cap, s.max_steps, s.polar_filter, s.filter_threshold};
    auto observer = [&](const flow2d::SphereState2D& st) {
      report.records.push_back(diagnostics::make_record(st, opts));
      if (oracle && st.t < 0.0) report.oracle_errors.push_back(max_relative_error(st.v, exact_profile(s.init, pg, st.t)));
      std::vector<double> column(static_cast<std::size_t>(st.v.rows()));
      for (int j = 0; j < st.v.rows(); ++j) column[static_cast<std::size_t>(j)] = st.v(j, 0);
      take_profile(st.t, column);
    };
    auto result = flow2d::evolve2d(std::move(state), s.t_end, controls, observer, s.observe_every);
    status = result.status;
    report.steps = result.steps;
    report.last_good_t = result.state.t;
    report.estimated_extinction = result.extinction_time;
    report.failure = result.failure;
  }
  switch (status) {
    case flow1d::Status::Completed: report.status = "completed"; break;
    case flow1d::Status::Extinct: report.status = "extinct"; break;
    case flow1d::Status::MaxSteps:
      report.status = "failed";
      report.failure = "max_steps exceeded";
      break;
    case flow1d::Status::Failed: report.status = "failed"; break;
  }
  diagnostics::fill_rates(report.records);
  report.checks = evaluate_checks(report);
  return report;
}

std::vector<Check> evaluate_checks(const RunReport& r) {
  std::vector<Check> checks;
  const auto& recs = r.records;
  const auto& sc = r.scenario;
  auto add = [&](std::string name, double value, double tol, bool pass, std::string detail) {
    checks.push_back({std::move(name), pass, value, tol, std::move(detail)});
  };
  add("run_status", r.status == "failed" ? 1.0 : 0.0, 0.0, r.status != "failed",
      r.status == "failed" ? r.failure : "positivity maintained on every accepted step");
  if (recs.empty()) return checks;

  if (!r.oracle_errors.empty()) {
    const double e = *std::max_element(r.oracle_errors.begin(), r.oracle_errors.end());
    add("oracle_tracking", e, 1e-3, e <= 1e-3, "max relative error against the closed form");
  }

  double gb = 0.0;
  for (const auto& x : recs) gb = std::max(gb, std::fabs(x.total_curvature - kEightPi));
  add("gauss_bonnet", gb, 1e-3, gb <= 1e-3, "max |int R u da - 8 pi|");

  if (recs.size() >= 2) {
    double da = 0.0;
    for (const auto& x : recs) da = std::max(da, std::fabs(x.d_area_dt + kEightPi) / kEightPi);
    add("area_rate", da, 1e-2, da <= 1e-2, "max |dA/dt + 8 pi| / 8 pi");
  }
  const bool extinct_at_zero = sc.init.kind == InitSpec::Kind::Sphere || sc.init.kind == InitSpec::Kind::Rosenau;
  if (extinct_at_zero) {
    double al = 0.0;
    for (const auto& x : recs) {
      if (x.t < 0.0) al = std::max(al, std::fabs(x.area - kEightPi * std::fabs(x.t)) / x.area);
    }
    add("area_law", al, 1e-2, al <= 1e-2, "max |A - 8 pi |t|| / A");
  }

  if (recs.size() >= 3) {
    double lj = 0.0;
    for (std::size_t i = 1; i + 1 < recs.size(); ++i) {
      const double scale = std::max(std::fabs(recs[i].dJ_dt_formula), 1e-12);
      lj = std::max(lj, std::fabs(recs[i].dJ_dt_measured - recs[i].dJ_dt_formula) / scale);
    }
    add("lyapunov_identity", lj, 1e-3, lj <= 1e-3, "max relative |dJ/dt measured - identity| over interior samples");
  }
  double jmax = -std::numeric_limits<double>::infinity();
  for (const auto& x : recs) jmax = std::max(jmax, x.J);
  add("lyapunov_sign", jmax, 0.0, jmax <= 0.0, "max J along the run");

  if (sc.diag_harnack) {
    double h = std::numeric_limits<double>::infinity();
    bool defined = true;
    for (const auto& x : recs) {
      if (std::isnan(x.harnack_min)) defined = false;
      else h = std::min(h, x.harnack_min);
    }
    const double tol = harnack_tolerance(sc.n);
    if (defined) add("harnack", h, tol, h >= -tol, "min of Lap R + R^2/v - |grad R|^2/R");
  }

  if (sc.diag_F && !std::isnan(recs.front().sup_F)) {
    if (has_oracle(sc.init)) {
      double f = 0.0;
      for (const auto& x : recs) f = std::max(f, x.sup_F);
      add("sup_F_zero", f, 1e-8, f <= 1e-8, "max sup F on a closed-form trajectory");
    } else {
      double rise = 0.0;
      for (std::size_t i = 1; i < recs.size(); ++i) rise = std::max(rise, recs[i].sup_F - recs[i - 1].sup_F);
      const double tol = 1e-4 * recs.front().sup_F;
      add("sup_F_decreasing", rise, tol, rise <= tol, "largest increase of sup F between samples");
    }
  }

  if (sc.solver == "2d") {
    const bool perturbed = sc.init.kind == InitSpec::Kind::Perturbed && sc.init.m != 0 && sc.init.eps != 0.0;
    if (perturbed) {
      double rise = 0.0;
      for (std::size_t i = 1; i < recs.size(); ++i) rise = std::max(rise, recs[i].theta_mass - recs[i - 1].theta_mass);
      const double tol = 1e-4 * recs.front().theta_mass;
      add("theta_mass_decreasing", rise, tol, rise <= tol, "largest increase of the theta-mass between samples");
    } else {
      double m = 0.0;
      for (const auto& x : recs) m = std::max(m, x.theta_mass);
      add("theta_mass_radial", m, 1e-9, m <= 1e-9, "max theta-mass of a radial run");
    }
  }

  if (r.estimated_extinction && extinct_at_zero) {
    const double e = std::fabs(*r.estimated_extinction);
    const double tol = sc.init.kind == InitSpec::Kind::Sphere ? 1e-3 : 5e-3;
    add("extinction_time", e, tol, e <= tol, "|estimated extinction time - 0|");
  }
  return checks;
}

std::string diagnose_json(const InitSpec& init, double t, int n) {
  Scenario s;
  s.init = init;
  s.n = n;
  s.t_start = t;
  s.t_end = t / 2.0;
  s.solver = "radial";
  validate(s);
  const grid::PsiGrid g(n);
  const flow1d::RadialState state{g, initial_radial(s), t};
  diagnostics::RecordOptions opts;
  opts.iso = true;
  const auto rec = diagnostics::make_record(state, opts);
  const auto terms = diagnostics::lyapunov_terms(state);
  json j;
  j["init"] = init.to_string();
  j["t"] = t;
  j["n"] = n;
  j["area"] = rec.area;
  j["total_curvature"] = rec.total_curvature;
  j["J"] = rec.J;
  j["dJ_dt_formula"] = rec.dJ_dt_formula;
  j["dJ_dt_dissipation"] = terms.dissipation;
  j["dJ_dt_gradient"] = terms.gradient;
  j["R_min"] = rec.R_min;
  j["R_max"] = rec.R_max;
  j["type_ratio"] = rec.type_ratio;
  j["harnack_min"] = std::isnan(rec.harnack_min) ? json(nullptr) : json(rec.harnack_min);
  j["grad_bound"] = rec.grad_bound;
  j["sup_F"] = rec.sup_F;
  if (rec.iso) {
    j["iso"] = {{"psi_star", rec.iso->psi_star}, {"L", rec.iso->L},         {"A1", rec.iso->A1},
                {"A2", rec.iso->A2},             {"I", rec.iso->I},         {"kappa", rec.iso->kappa},
                {"stat_residual", rec.iso->stationarity_residual}, {"tie", rec.iso->tie}};
  }
  if (auto sol = init.oracle(); sol && init.kind != InitSpec::Kind::Perturbed) {
    j["exact"] = {{"area", kEightPi * std::fabs(t)},
                  {"total_curvature", kEightPi},
                  {"type_ratio", exact::type_ratio(*sol, t)},
                  {"max_R", sol->max_R(t)}};
  }
  return j.dump(2);
}

IsoOutput iso_closed_form(const InitSpec& init, double t, int n, bool cylinder, double half_width, int samples) {
  iso::LatitudeProfile profile;
  iso::IsoResult result;
  if (cylinder) {
    const auto sol = init.oracle();
    if (!sol || init.kind == InitSpec::Kind::Perturbed) {
      throw invalid_argument("the cylinder route needs a closed-form initial datum (sphere or rosenau)");
    }
    if (!(t < 0.0)) throw invalid_argument("t must be negative");
    if (samples < 5 || samples % 2 == 0) throw invalid_argument("samples must be odd and at least 5");
    const double hw = half_width > 0.0 ? half_width : 2.0 * sol->mu() * std::fabs(t) + 15.0;
    const grid::CylinderWindow window(sol->x0() - hw, sol->x0() + hw, samples);
    const auto w = sol->sample_w(window, t);
    profile = iso::latitude_profile(window, w);
    result = iso::iso_ratio(window, w);
  } else {
    Scenario s;
    s.init = init;
    s.n = n;
    s.t_start = t;
    s.t_end = t / 2.0;
    validate(s);
    const grid::PsiGrid g(n);
    const auto v = initial_radial(s);
    profile = iso::latitude_profile(g, v);
    result = iso::iso_ratio(g, v);
  }
  std::ostringstream csv;
  csv.precision(17);
  csv << "psi,L,A1,A2,ratio\n";
  for (std::size_t i = 0; i < profile.psi.size(); ++i) {
    csv << profile.psi[i] << ',' << profile.L[i] << ',' << profile.A1[i] << ',' << profile.A2[i] << ','
        << profile.ratio[i] << '\n';
  }
  json j;
  j["init"] = init.to_string();
  j["t"] = t;
  j["route"] = cylinder ? "cylinder" : "sphere";
  j["total_area"] = profile.total_area;
  j["psi_star"] = result.psi_star;
  j["L"] = result.L;
  j["A1"] = result.A1;
  j["A2"] = result.A2;
  j["I"] = result.I;
  j["kappa"] = result.kappa;
  j["stat_residual"] = result.stationarity_residual;
  j["tie"] = result.tie;
  return {csv.str(), j.dump(2)};
}

std::string ode_json(double mu, double x0, double t0, double t1) {
  const auto s0 = ode::closed_form(mu, x0, t0);
  const auto traj = ode::integrate(s0, t1);
  const double c0 = s0.conserved();
  const double ratio0 = s0.b / s0.a;
  double drift = 0.0, ratio_drift = 0.0, err = 0.0;
  for (const auto& s : traj.states) {
    drift = std::max(drift, std::fabs(s.conserved() - c0) / std::fabs(c0));
    ratio_drift = std::max(ratio_drift, std::fabs(s.b / s.a - ratio0) / ratio0);
    if (s.t < 0.0) {
      const auto e = ode::closed_form(mu, x0, s.t);
      err = std::max({err, std::fabs(s.a - e.a) / e.a, std::fabs(s.b - e.b) / e.b, std::fabs(s.d - e.d) / e.d});
    }
  }
  const auto& last = traj.states.back();
  json j;
  j["mu"] = mu;
  j["x0"] = x0;
  j["t0"] = t0;
  j["t1"] = t1;
  j["status"] = ode::to_string(traj.status);
  if (!traj.detail.empty()) j["detail"] = traj.detail;
  j["steps"] = traj.states.size() - 1;
  j["conserved_drift"] = drift;
  j["b_over_a_drift"] = ratio_drift;
  j["closed_form_error"] = err;
  j["final"] = {{"t", last.t}, {"a", last.a}, {"b", last.b}, {"d", last.d},
                {"a_tilde", 2.0 * std::sqrt(last.a * last.b)}};
  return j.dump(2);
}

std::string fit_report_json(const ode::FitReport& f) {
  auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  json j;
  j["mu"] = num(f.mu);
  j["x0"] = num(f.x0);
  j["residual"] = num(f.residual);
  j["conserved"] = num(f.conserved);
  j["label"] = ode::to_string(f.label);
  return j.dump(2);
}

}  // namespace ancient::runner
