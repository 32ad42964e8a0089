#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ancient/diagnostics.hpp"
#include "ancient/error.hpp"
#include "ancient/exact.hpp"
#include "ancient/hyperbolic.hpp"
#include "support.hpp"

using namespace ancient;
using diagnostics::RadialState;
using exact::AncientSolution;
using grid::PsiGrid;
using std::numbers::pi;

namespace {

constexpr double kEightPi = 8 * pi;

RadialState exact_state(const AncientSolution& sol, int n, double t) {
  const PsiGrid g(n);
  return {g, sol.sample_v(g, t), t};
}

// Cap integral in closed form: int_{x > a} R U dx dtheta = 4 pi - 4 pi A sinh(2 (a - x0)) / w(a).
double cap_oracle(double mu, double x0, double psi0, double t) {
  const double A = -mu * hyp::csch(4 * mu * t);
  const double a = grid::inverse_gudermannian(psi0);
  return 4 * pi - 4 * pi * A * std::sinh(2 * (a - x0)) / exact::rosenau_w(a, t, mu, x0);
}

}  // namespace

TEST_CASE("scalar curvature") {
  SUBCASE("sphere at t = -1 has R = 1") {
    const auto s = exact_state(AncientSolution::contracting_sphere(), 64, -1.0);
    for (double r : diagnostics::scalar_curvature(s)) CHECK(r == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("Rosenau equator value 4 csch 4") {
    const auto sol = AncientSolution::rosenau(1.0);
    const auto s = exact_state(sol, 256, -1.0);
    const auto R = diagnostics::scalar_curvature(s);
    CHECK(R[128] == doctest::Approx(sol.R(s.grid.node(128), -1.0)).epsilon(1e-8));
    CHECK(0.5 * (R[127] + R[128]) == doctest::Approx(0.14657428130346242386).epsilon(1e-4));
    const auto exact_R = sol.sample_R(s.grid, -1.0);
    CHECK(testing::max_rel_diff(R, exact_R) < 1e-5);
  }
  SUBCASE("steady state is flat") {
    const PsiGrid g(256);
    const auto v = testing::sample(g, [](double p) { return std::cos(p) * std::cos(p); });
    for (double r : diagnostics::scalar_curvature(g, v)) CHECK(std::fabs(r) < 1e-6);
    std::vector<double> R(256, 0.0);
    CHECK_THROWS_AS(diagnostics::harnack_residual(g, v, R), Error);
  }
  SUBCASE("non-positive pressure rejected") {
    const PsiGrid g(16);
    std::vector<double> v(16, 1.0);
    v[4] = 0.0;
    CHECK_THROWS_AS(diagnostics::scalar_curvature(g, v), Error);
  }
}

TEST_CASE("temporal curvature cross-check") {
  const auto sol = AncientSolution::rosenau(1.0);
  const PsiGrid g(256);
  const double t = -1.0, d = 1e-4;
  const auto R_t = diagnostics::temporal_curvature(sol.sample_v(g, t - d), sol.sample_v(g, t), sol.sample_v(g, t + d), d);
  const auto R_e = diagnostics::scalar_curvature(RadialState{g, sol.sample_v(g, t), t});
  CHECK(testing::max_abs_diff(R_t, R_e) < 1e-5);
  CHECK_THROWS_AS(diagnostics::temporal_curvature(std::vector<double>(3, 1.0), std::vector<double>(3, 1.0),
                                                  std::vector<double>(3, 1.0), 0.0),
                  Error);
}

TEST_CASE("area and Gauss-Bonnet") {
  const auto sphere = exact_state(AncientSolution::contracting_sphere(), 128, -1.0);
  CHECK(diagnostics::area(sphere) == doctest::Approx(kEightPi).epsilon(1e-13));
  CHECK(std::fabs(diagnostics::total_curvature(sphere) - kEightPi) < 1e-8);

  const auto sol = AncientSolution::rosenau(1.0);
  for (double t : {-1.0, -2.0}) {
    const auto s = exact_state(sol, 256, t);
    CHECK(diagnostics::area(s) == doctest::Approx(kEightPi * -t).epsilon(1e-6));
    CHECK(std::fabs(diagnostics::total_curvature(s) - kEightPi) < 1e-3 * kEightPi);
  }
}

TEST_CASE("Lyapunov functional") {
  SUBCASE("sphere: J = -8 pi, rate = -8 pi at t = -1") {
    const auto s = exact_state(AncientSolution::contracting_sphere(), 128, -1.0);
    CHECK(diagnostics::lyapunov_J(s) == doctest::Approx(-kEightPi).epsilon(1e-12));
    CHECK(diagnostics::lyapunov_rate(s) == doctest::Approx(-kEightPi).epsilon(1e-12));
  }
  SUBCASE("Rosenau: identity against a time difference of J") {
    const auto sol = AncientSolution::rosenau(1.0);
    const double t = -1.0, d = 1e-4;
    const double Jp = diagnostics::lyapunov_J(exact_state(sol, 256, t + d));
    const double Jm = diagnostics::lyapunov_J(exact_state(sol, 256, t - d));
    const auto s = exact_state(sol, 256, t);
    const double measured = (Jp - Jm) / (2 * d);
    const double formula = diagnostics::lyapunov_rate(s);
    CHECK(std::fabs(measured - formula) <= 1e-3 * std::fabs(measured));
    CHECK(diagnostics::lyapunov_J(s) <= 0.0);
    const auto terms = diagnostics::lyapunov_terms(s);
    CHECK(terms.dissipation <= 0.0);
    CHECK(terms.gradient <= 0.0);
    CHECK(terms.dissipation + terms.gradient == doctest::Approx(formula));

    // The identity with |grad v|^2 v_t / v in the second term is off by far more.
    const auto R = diagnostics::scalar_curvature(s);
    const auto vp = grid::d_dpsi(s.v, s.grid, 1);
    std::vector<double> alt(s.v.size());
    for (std::size_t j = 0; j < alt.size(); ++j) alt[j] = vp[j] * vp[j] * R[j];  // |grad v|^2 v_t / v
    const double wrong = terms.dissipation - grid::integrate_sphere(alt, s.grid);
    CHECK(std::fabs(measured - wrong) > 1e-2 * std::fabs(measured));
  }
}

TEST_CASE("Harnack residual on closed forms") {
  const auto sol = AncientSolution::rosenau(1.0);
  CHECK(diagnostics::harnack_residual(exact_state(sol, 256, -1.0)) >= -1e-4);
  CHECK(diagnostics::harnack_residual(exact_state(sol, 256, -10.0)) >= -1e-4);
  // Sphere: Lap R = grad R = 0, so the residual is R^2 / v = 2 / |t|.
  CHECK(diagnostics::harnack_residual(exact_state(AncientSolution::contracting_sphere(), 64, -1.0)) ==
        doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("F fingerprint") {
  CHECK(diagnostics::sup_F(exact_state(AncientSolution::rosenau(1.0), 256, -1.0)) <= 1e-8);
  CHECK(diagnostics::sup_F(exact_state(AncientSolution::rosenau(0.7), 256, -2.0)) <= 1e-8);
  CHECK(diagnostics::sup_F(exact_state(AncientSolution::contracting_sphere(), 64, -1.0)) <= 1e-12);

  const PsiGrid g(128);
  const auto sol = AncientSolution::rosenau(1.0);
  auto v = sol.sample_v(g, -1.0);
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double c = std::cos(g.node(static_cast<int>(j)));
    v[j] *= 1 + 0.05 * c * c;
  }
  CHECK(diagnostics::sup_F(RadialState{g, v, -1.0}) > 1e-4);

  const grid::ThetaGrid tg(16);
  grid::Field2D f(128, 16);
  for (int j = 0; j < 128; ++j)
    for (int k = 0; k < 16; ++k) f(j, k) = v[j] * (1 + 0.01 * std::cos(tg.node(k)));
  CHECK_THROWS_AS(diagnostics::sup_F(diagnostics::SphereState2D{g, tg, f, -1.0}), Error);
  const auto radial2d = grid::Field2D::from_radial(v, 16);
  CHECK(diagnostics::sup_F(diagnostics::SphereState2D{g, tg, radial2d, -1.0}) ==
        doctest::Approx(diagnostics::sup_F(RadialState{g, v, -1.0})));
}

TEST_CASE("gradient bound stays bounded on Rosenau") {
  const auto sol = AncientSolution::rosenau(1.0);
  const double b1 = diagnostics::grad_bound(exact_state(sol, 256, -1.0));
  for (double t : {-2.0, -5.0, -10.0}) CHECK(diagnostics::grad_bound(exact_state(sol, 256, t)) <= 2 * b1);
}

TEST_CASE("theta mass") {
  const PsiGrid g(64);
  const grid::ThetaGrid tg(32);
  const auto v = AncientSolution::rosenau(1.0).sample_v(g, -2.0);
  CHECK(diagnostics::theta_mass({g, tg, grid::Field2D::from_radial(v, 32), -2.0}) == 0.0);
  grid::Field2D p(64, 32);
  for (int j = 0; j < 64; ++j) {
    const double c = std::cos(g.node(j));
    for (int k = 0; k < 32; ++k) p(j, k) = v[j] * (1 + 0.05 * std::cos(tg.node(k)) * c * c);
  }
  CHECK(diagnostics::theta_mass({g, tg, p, -2.0}) > 0.0);
}

TEST_CASE("cap curvature") {
  const auto sol = AncientSolution::rosenau(1.0);
  CHECK(diagnostics::cap_curvature(sol, pi / 4, -50.0) == doctest::Approx(4 * pi).epsilon(1e-10));
  CHECK(diagnostics::cap_curvature(sol, pi / 4, -50.0, diagnostics::Cap::South) ==
        doctest::Approx(4 * pi).epsilon(1e-10));
  CHECK(diagnostics::cap_curvature(sol, -pi / 2, -50.0) == doctest::Approx(kEightPi).epsilon(1e-10));
  CHECK(diagnostics::cap_curvature(sol, -pi / 2, -5.0) == doctest::Approx(kEightPi).epsilon(1e-10));

  for (double t : {-0.3, -1.0, -4.0}) {
    for (double psi0 : {-1.0, 0.0, 0.6, 1.4}) {
      CHECK(diagnostics::cap_curvature(sol, psi0, t) == doctest::Approx(cap_oracle(1.0, 0.0, psi0, t)).epsilon(1e-10));
    }
  }
  const auto shifted = AncientSolution::rosenau(0.8, 0.5);
  CHECK(diagnostics::cap_curvature(shifted, 0.2, -2.0) ==
        doctest::Approx(cap_oracle(0.8, 0.5, 0.2, -2.0)).epsilon(1e-10));

  CHECK_THROWS_AS(diagnostics::cap_curvature(AncientSolution::contracting_sphere(), 0.0, -1.0), Error);
  CHECK_THROWS_AS(diagnostics::cap_curvature(sol, pi / 2, -1.0), Error);
}

TEST_CASE("records and rates") {
  const auto sphere = AncientSolution::contracting_sphere();
  std::vector<diagnostics::DiagnosticsRecord> recs;
  for (double t : {-1.0, -0.9, -0.75, -0.7}) recs.push_back(diagnostics::make_record(exact_state(sphere, 64, t)));
  diagnostics::fill_rates(recs);
  for (const auto& r : recs) {
    CHECK(r.d_area_dt == doctest::Approx(-kEightPi).epsilon(1e-10));
    CHECK(r.type_ratio == doctest::Approx(1.0).epsilon(1e-12));
  }

  std::vector<diagnostics::DiagnosticsRecord> one{diagnostics::make_record(exact_state(sphere, 64, -1.0))};
  diagnostics::fill_rates(one);
  CHECK(std::isnan(one[0].d_area_dt));
  CHECK(std::isnan(one[0].dJ_dt_measured));

  diagnostics::RecordOptions opts;
  opts.iso = true;
  const auto r = diagnostics::make_record(exact_state(sphere, 64, -1.0), opts);
  REQUIRE(r.iso.has_value());
  CHECK(diagnostics::csv_columns(false).size() == 14);
  CHECK(diagnostics::csv_values(r, false).size() == 14);
  CHECK(diagnostics::csv_columns(true).size() == 21);
  CHECK(diagnostics::csv_values(r, true).size() == 21);
  CHECK(diagnostics::csv_columns(false).front() == "t");
}
