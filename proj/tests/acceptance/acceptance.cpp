// Acceptance suite: one PASS/FAIL line per criterion.
//
// Exit status is the number of failing criteria that were not named with
// --expect-fail=N (repeatable). Expected failures still print FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "ancient/diagnostics.hpp"
#include "ancient/exact.hpp"
#include "ancient/hyperbolic.hpp"
#include "ancient/isoperimetric.hpp"
#include "ancient/odered.hpp"
#include "ancient/runner.hpp"

using namespace ancient;
using exact::AncientSolution;
using std::numbers::pi;

namespace {

constexpr double kEightPi = 8.0 * pi;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

const runner::Check& check(const runner::RunReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  throw std::runtime_error("run " + r.scenario.name + " has no check " + name);
}

runner::Scenario scenario(const std::string& name, const std::string& init, int n, double t0, double t1,
                          double every) {
  runner::Scenario s;
  s.name = name;
  s.init = runner::parse_init(init);
  s.n = n;
  s.t_start = t0;
  s.t_end = t1;
  s.observe_every = every;
  return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Trajectories shared by several criteria.
struct Runs {
  runner::RunReport rosenau256, rosenau512, sphere;
  double rosenau256_seconds = 0.0;

  Runs() {
    auto t0 = std::chrono::steady_clock::now();
    rosenau256 = runner::run(scenario("rosenau_n256", "rosenau:mu=1", 256, -2.0, -1.0, 0.01));
    rosenau256_seconds = seconds_since(t0);
    auto fine = scenario("rosenau_n512", "rosenau:mu=1", 512, -2.0, -1.0, 0.05);
    fine.diag_harnack = false;
    rosenau512 = runner::run(fine);
    sphere = runner::run(scenario("sphere_n256", "sphere", 256, -1.0, -0.5, 0.01));
  }
};

Outcome c1_oracle_tracking(const Runs& r) {
  const double e256 = max_of(r.rosenau256.oracle_errors);
  const double e512 = max_of(r.rosenau512.oracle_errors);
  const double ratio = e256 / e512;
  const bool pass = r.rosenau256.status == "completed" && e256 <= 1e-3 && ratio >= 3.0 &&
                    r.rosenau256_seconds <= 30.0;
  return {pass, fmt("max rel err n=256 %.3e (<= 1e-3), n=512 %.3e, ratio %.2f (>= 3), order %.2f, %.2f s (<= 30)",
                    e256, e512, ratio, std::log2(ratio), r.rosenau256_seconds)};
}

Outcome c2_sphere(const Runs& r) {
  const double e = max_of(r.sphere.oracle_errors);
  return {r.sphere.status == "completed" && e <= 1e-9,
          fmt("max rel err vs 1/(2|t|) on [-1,-0.5] %.3e (<= 1e-9)", e)};
}

Outcome c3_gauss_bonnet(const Runs& r) {
  double worst = 0.0;
  std::size_t n = 0;
  for (const auto* run : {&r.rosenau256, &r.sphere}) {
    for (const auto& rec : run->records) {
      worst = std::max(worst, std::fabs(rec.total_curvature - kEightPi));
      ++n;
    }
  }
  return {worst <= 1e-3, fmt("max |int R u da - 8 pi| over %zu samples %.3e (<= 1e-3)", n, worst)};
}

Outcome c4_area_law(const Runs& r) {
  double rate = 0.0, law = 0.0;
  for (const auto* run : {&r.rosenau256, &r.sphere}) {
    for (const auto& rec : run->records) {
      rate = std::max(rate, std::fabs(rec.d_area_dt + kEightPi) / kEightPi);
      law = std::max(law, std::fabs(rec.area - kEightPi * std::fabs(rec.t)) / rec.area);
    }
  }
  return {rate <= 1e-2 && law <= 1e-2, fmt("dA/dt rel err %.3e, A - 8 pi |t| rel err %.3e (<= 1e-2)", rate, law)};
}

Outcome c5_lyapunov(const Runs& r) {
  const auto& id = check(r.rosenau256, "lyapunov_identity");
  const auto& sign = check(r.rosenau256, "lyapunov_sign");
  return {id.pass && sign.pass,
          fmt("dJ/dt rel mismatch %.3e (<= 1e-3) over %zu samples, max J %.4f (<= 0)", id.value,
              r.rosenau256.records.size() - 2, sign.value)};
}

Outcome c6_harnack() {
  const auto sol = AncientSolution::rosenau(1.0);
  const grid::PsiGrid g(256);
  bool pass = true;
  std::string detail;
  for (double t : {-1.0, -5.0, -10.0}) {
    const double h = diagnostics::harnack_residual(diagnostics::RadialState{g, sol.sample_v(g, t), t});
    pass = pass && h >= -1e-4;
    detail += fmt("t=%g: %.3e%s ", t, h, h >= -1e-4 ? "" : " (< -1e-4)");
  }
  return {pass, detail + "at n=256"};
}

Outcome c7_F() {
  const grid::PsiGrid g(256);
  double zero = 0.0;
  for (double t : {-1.0, -2.0, -5.0}) {
    zero = std::max(zero, diagnostics::sup_F({g, AncientSolution::rosenau(1.0).sample_v(g, t), t}));
    zero = std::max(zero, diagnostics::sup_F({g, AncientSolution::contracting_sphere().sample_v(g, t), t}));
  }
  const auto pert = runner::run(scenario("perturbed_radial", "perturbed:base=rosenau,mu=1,eps=0.05,m=0", 256,
                                         -2.0, -1.0, 0.05));
  const auto& dec = check(pert, "sup_F_decreasing");
  return {zero <= 1e-8 && dec.pass && pert.status == "completed",
          fmt("closed forms sup F %.3e (<= 1e-8); perturbed radial sup F %.3e -> %.3e, max rise %.3e (<= %.3e)",
              zero, pert.records.front().sup_F, pert.records.back().sup_F, dec.value, dec.tolerance)};
}

Outcome c8_backward_limit() {
  double sup = 0.0, steady = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    const double psi = -pi / 2 + pi * i / 4000.0;
    const double c2 = std::cos(psi) * std::cos(psi);
    sup = std::max(sup, std::fabs(exact::rosenau_v(psi, -50.0, 1.0) - c2));
    for (double C : {0.5, 1.0, 2.0}) steady = std::max(steady, std::fabs(exact::BackwardLimit{C}.steady_residual(psi)));
  }
  return {sup <= 1e-6 && steady <= 1e-12,
          fmt("sup |v(-50) - cos^2| %.3e (<= 1e-6), steady residual %.3e (<= 1e-12)", sup, steady)};
}

Outcome c9_cap() {
  const double cap = diagnostics::cap_curvature(AncientSolution::rosenau(1.0), pi / 4, -50.0);
  return {std::fabs(cap - 4 * pi) <= 1e-3, fmt("cap integral %.10f, |cap - 4 pi| %.3e (<= 1e-3)", cap, std::fabs(cap - 4 * pi))};
}

Outcome c10_isoperimetric() {
  const grid::PsiGrid g(256);
  const auto round = iso::iso_ratio(g, std::vector<double>(256, exact::sphere_v(-1.0)));
  const bool round_ok = round.tie && std::fabs(round.I - 1.0) <= 1e-9;

  auto cylinder = [](double t) {
    const double hw = 2 * -t + 15;
    const grid::CylinderWindow w(-hw, hw, 8001);
    return iso::iso_ratio(w, AncientSolution::rosenau(1.0).sample_w(w, t));
  };
  const auto r10 = cylinder(-10.0);
  const auto r20 = cylinder(-20.0);
  const double ratio = r20.I / r10.I;
  const bool decay_ok = std::fabs(ratio - 0.5) <= 0.2 * 0.5;

  const auto r1 = iso::iso_ratio(g, AncientSolution::rosenau(1.0).sample_v(g, -1.0));
  std::vector<double> asym;
  for (double psi : g.nodes()) asym.push_back((1.5 + 0.5 * std::sin(psi)) * (0.2 + std::cos(psi) * std::cos(psi)));
  const auto ra = iso::iso_ratio(g, asym);
  const double stat = std::max({r10.stationarity_residual, r20.stationarity_residual, r1.stationarity_residual,
                                ra.stationarity_residual});
  return {round_ok && decay_ok && stat <= 1e-4,
          fmt("sphere I-1 %.1e tie=%d; I(-20)/I(-10) = %.4f (0.5 +- 20%%); max stationarity residual %.2e (<= 1e-4)",
              round.I - 1.0, round.tie ? 1 : 0, ratio, stat)};
}

Outcome c11_theta_mass() {
  auto s = scenario("perturbed_2d", "perturbed:base=rosenau,mu=1,eps=0.05,m=1", 128, -2.0, -1.5, 0.05);
  s.solver = "2d";
  s.m = 64;
  s.diag_harnack = false;
  const auto t0 = std::chrono::steady_clock::now();
  const auto pert = runner::run(s);
  const double secs = seconds_since(t0);
  const auto& dec = check(pert, "theta_mass_decreasing");

  auto radial = s;
  radial.name = "radial_2d";
  radial.init = runner::parse_init("rosenau:mu=1");
  const auto rad = runner::run(radial);
  const auto& keep = check(rad, "theta_mass_radial");
  return {pert.status == "completed" && dec.pass && keep.pass && secs <= 60.0,
          fmt("perturbed mass %.4e -> %.4e, max rise %.2e (<= %.2e), %.1f s; radial max mass %.2e (<= 1e-9)",
              pert.records.front().theta_mass, pert.records.back().theta_mass, dec.value, dec.tolerance, secs,
              keep.value)};
}

Outcome c12_ode() {
  const double mu = 1.0;
  const auto s0 = ode::closed_form(mu, 0.0, -3.0);
  const auto traj = ode::integrate(s0, -1.0);
  double drift = 0.0, err = 0.0;
  for (const auto& s : traj.states) {
    drift = std::max(drift, std::fabs(s.conserved() - s0.conserved()) / s0.conserved());
    const double a_tilde = -mu * hyp::csch(4 * mu * s.t);
    const double d = -mu * hyp::coth(4 * mu * s.t);
    err = std::max({err, std::fabs(2 * std::sqrt(s.a * s.b) - a_tilde) / a_tilde, std::fabs(s.d - d) / d});
  }
  std::vector<double> x, w;
  for (int i = 0; i <= 200; ++i) {
    x.push_back(0.3 - 4.0 + 0.04 * i);
    w.push_back(exact::rosenau_w(x.back(), -2.0, 1.5, 0.3));
  }
  const auto fit = ode::fit_rosenau(x, w);
  const double fit_err = std::max(std::fabs(fit.mu - 1.5), std::fabs(fit.x0 - 0.3));
  return {traj.status == ode::OdeStatus::Completed && err <= 1e-6 && drift <= 1e-9 && fit_err <= 1e-8,
          fmt("closed-form err %.2e (<= 1e-6), conserved drift %.2e (<= 1e-9), fit (mu, x0) err %.2e (<= 1e-8)", err,
              drift, fit_err)};
}

// |t| max R with R = w_t / w, scanned in the cylinder gauge. The tips sit near
// |x| = 2 mu |t|, far past where latitude can be resolved in double precision.
double scanned_type_ratio(const AncientSolution& sol, double t, double mu = 1.0) {
  const double half = 2 * mu * std::fabs(t) + 20;
  double best = 0.0;
  for (int i = 0; i <= 8000; ++i) {
    const double x = -half + 2 * half * i / 8000.0;
    best = std::max(best, sol.w_t(x, t) / sol.w(x, t));
  }
  return std::fabs(t) * best;
}

Outcome c13_type() {
  double sphere_err = 0.0;
  for (double t : {-0.5, -1.0, -5.0, -20.0}) {
    sphere_err = std::max(sphere_err, std::fabs(scanned_type_ratio(AncientSolution::contracting_sphere(), t) - 1.0));
  }
  double rel = 0.0;
  std::string vals;
  for (double t : {-5.0, -10.0, -20.0}) {
    const double z = 4 * std::fabs(t);
    const double formula = z * hyp::coth(z);
    const double got = scanned_type_ratio(AncientSolution::rosenau(1.0), t);
    rel = std::max(rel, std::fabs(got - formula) / formula);
    vals += fmt("%.6f ", got);
  }
  return {sphere_err <= 1e-12 && rel <= 1e-6,
          fmt("sphere |t| R_max - 1 = %.1e; Rosenau %s(rel err %.1e <= 1e-6)", sphere_err, vals.c_str(), rel)};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a.rfind("--expect-fail=", 0) == 0) expected.insert(std::stoi(a.substr(14)));
  }

  const Runs runs;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"oracle tracking", [&] { return c1_oracle_tracking(runs); }},
      {"sphere exactness", [&] { return c2_sphere(runs); }},
      {"Gauss-Bonnet", [&] { return c3_gauss_bonnet(runs); }},
      {"area law", [&] { return c4_area_law(runs); }},
      {"Lyapunov identity", [&] { return c5_lyapunov(runs); }},
      {"Harnack inequality", c6_harnack},
      {"F fingerprint", c7_F},
      {"backward limit", c8_backward_limit},
      {"curvature concentration", c9_cap},
      {"isoperimetric", c10_isoperimetric},
      {"theta-mass monotonicity", c11_theta_mass},
      {"ODE reduction", c12_ode},
      {"type classification", c13_type},
  };

  int unexpected = 0;
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("criterion %2d %s  %-24s %s%s\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str(),
                !o.pass && expected.count(id) ? " [expected failure]" : "");
    if (!o.pass) {
      ++failed;
      if (!expected.count(id)) ++unexpected;
    }
  }
  std::printf("%zu criteria, %d passed, %d failed (%d unexpected)\n", criteria.size(),
              static_cast<int>(criteria.size()) - failed, failed, unexpected);
  return unexpected;
}
