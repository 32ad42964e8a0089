#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ancient/error.hpp"
#include "ancient/exact.hpp"
#include "ancient/hyperbolic.hpp"
#include "support.hpp"

using namespace ancient;
using exact::AncientSolution;
using std::numbers::pi;

// Frozen with 25-digit arithmetic.
constexpr double kCoth2 = 1.03731472072754809588;
constexpr double kTwoCsch4 = 0.07328714065173121194;
constexpr double kFourCoth4 = 4.00268460160672995965;
constexpr double kFourCsch4 = 0.14657428130346242386;
constexpr double kTwoCsch2Sq = 0.15204365967614219851;

TEST_CASE("stable hyperbolic helpers") {
  CHECK(hyp::csch(4.0) == doctest::Approx(1 / std::sinh(4.0)).epsilon(1e-15));
  CHECK(hyp::csch(-4.0) == doctest::Approx(-1 / std::sinh(4.0)).epsilon(1e-15));
  CHECK(hyp::sech(3.0) == doctest::Approx(1 / std::cosh(3.0)).epsilon(1e-15));
  CHECK(std::isfinite(hyp::csch(600.0)));
  CHECK(hyp::csch(600.0) > 0.0);
  CHECK(hyp::csch(800.0) == 0.0);
  CHECK(hyp::coth(-200.0) == -1.0);
}

TEST_CASE("contracting sphere") {
  CHECK(exact::sphere_v(-1.0) == 0.5);
  CHECK(exact::sphere_v(-0.5) == 1.0);
  const auto s = AncientSolution::contracting_sphere();
  CHECK(s.R(0.3, -1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(exact::type_ratio(s, -1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(exact::type_ratio(s, -37.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(exact::sphere_v(0.0), Error);
  CHECK_THROWS_AS(exact::sphere_v(1.0), Error);
}

TEST_CASE("Rosenau point values") {
  CHECK(exact::rosenau_v(0.0, -1.0, 1.0) == doctest::Approx(kCoth2).epsilon(1e-14));
  CHECK(exact::rosenau_v(pi / 2, -1.0, 1.0) == doctest::Approx(kTwoCsch4).epsilon(1e-13));
  CHECK(exact::rosenau_v(-pi / 2, -1.0, 1.0) == doctest::Approx(kTwoCsch4).epsilon(1e-13));
  CHECK(exact::rosenau_w(0.0, -1.0, 1.0) == doctest::Approx(kCoth2).epsilon(1e-14));
  CHECK(exact::rosenau_w(0.7, -1.0, 1.0, 0.7) == doctest::Approx(kCoth2).epsilon(1e-14));
  CHECK(exact::rosenau_R(pi / 2, -1.0, 1.0) == doctest::Approx(kFourCoth4).epsilon(1e-12));
  CHECK(exact::rosenau_R(0.0, -1.0, 1.0) == doctest::Approx(kFourCsch4).epsilon(1e-12));
  const auto r = AncientSolution::rosenau(1.0);
  CHECK(r.v_t(0.0, -1.0) == doctest::Approx(kTwoCsch2Sq).epsilon(1e-13));
  CHECK(exact::type_ratio(r, -10.0) == doctest::Approx(40.0).epsilon(1e-14));
  CHECK(exact::type_ratio(r, -20.0) / exact::type_ratio(r, -10.0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("Rosenau errors") {
  CHECK_THROWS_AS(exact::rosenau_v(0.0, 0.0, 1.0), Error);
  CHECK_THROWS_AS(exact::rosenau_v(0.0, -1.0, 0.0), Error);
  CHECK_THROWS_AS(exact::rosenau_v(0.0, -1.0, -2.0), Error);
  CHECK_THROWS_AS(AncientSolution::rosenau(-1.0), Error);
  CHECK_THROWS_AS(AncientSolution::rosenau(1.0, NAN), Error);
}

TEST_CASE("backward limit and deep past") {
  for (double psi : {-1.2, 0.0, 0.4, 1.5}) {
    const double c2 = std::cos(psi) * std::cos(psi);
    CHECK(std::fabs(exact::rosenau_v(psi, -50.0, 1.0) - c2) < 1e-12);
    CHECK(std::fabs(exact::rosenau_v(psi, -50.0, 2.0) - 2 * c2) < 1e-12);
  }
  CHECK(exact::rosenau_w(3.0, -50.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  // The tip sits near x = 100, well beyond what psi can resolve in double precision.
  const auto deep = AncientSolution::rosenau(1.0);
  CHECK(deep.w_t(130.0, -50.0) / deep.w(130.0, -50.0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(deep.max_R(-50.0) == doctest::Approx(4.0).epsilon(1e-12));
  const auto lim = exact::backward_limit(AncientSolution::rosenau(2.0));
  CHECK(lim.C == 2.0);
  CHECK(exact::backward_limit(AncientSolution::contracting_sphere()).C == 0.0);
  for (double C : {0.5, 1.0, 2.0}) {
    const exact::BackwardLimit b{C};
    for (double psi = -1.5; psi <= 1.5; psi += 0.05) CHECK(std::fabs(b.steady_residual(psi)) <= 1e-12);
  }
}

TEST_CASE("closed-form derivatives agree with finite differences") {
  const auto r = AncientSolution::rosenau(1.3, 0.2);
  for (double t : {-0.3, -1.0, -4.0}) {
    for (double psi : {-1.3, -0.6, 0.0, 0.5, 1.2}) {
      auto v = [&](double p) { return r.v(p, t); };
      auto vp = [&](double p) { return r.v_psi(p, t); };
      auto vpp = [&](double p) { return r.v_psipsi(p, t); };
      auto vt = [&](double s) { return r.v(psi, s); };
      CHECK(std::fabs(r.v_psi(psi, t) - testing::central(v, psi)) < 1e-7);
      CHECK(std::fabs(r.v_psipsi(psi, t) - testing::central(vp, psi)) < 1e-7);
      CHECK(std::fabs(r.v_psipsipsi(psi, t) - testing::central(vpp, psi)) < 1e-7);
      CHECK(std::fabs(r.v_t(psi, t) - testing::central(vt, t)) < 1e-7);
    }
  }
}

TEST_CASE("closed forms solve the pressure equation") {
  for (const auto& sol : {AncientSolution::contracting_sphere(), AncientSolution::rosenau(1.0),
                          AncientSolution::rosenau(0.6, -0.4)}) {
    for (double t : {-0.2, -1.0, -7.0}) {
      for (double psi = -1.5; psi <= 1.5; psi += 0.1) {
        const double v = sol.v(psi, t), vp = sol.v_psi(psi, t), vpp = sol.v_psipsi(psi, t);
        const double lap = vpp - std::tan(psi) * vp;
        const double res = sol.v_t(psi, t) - (v * lap - vp * vp + 2 * v * v);
        CHECK(std::fabs(res) <= 1e-10 * std::max(1.0, std::fabs(sol.v_t(psi, t))));
      }
    }
  }
}

TEST_CASE("pressure is positive and increasing") {
  const auto r = AncientSolution::rosenau(1.0);
  for (double t = -50.0; t <= -0.1; t += 0.7) {
    for (double psi = -1.55; psi <= 1.55; psi += 0.1) {
      CHECK(r.v(psi, t) > 0.0);
      CHECK(r.v(psi, t + 1e-3) >= r.v(psi, t));
      CHECK(r.v_t(psi, t) >= 0.0);
      if (t >= -5.0) CHECK(r.v_t(psi, t) > 0.0);
    }
  }
}

TEST_CASE("gauge consistency") {
  const auto r = AncientSolution::rosenau(1.0, 0.3);
  for (double t : {-0.5, -3.0, -20.0}) {
    for (double x = -10.0; x <= 10.0; x += 0.25) {
      const auto g = r.gauges(x, t);
      const double c = 1 / std::cosh(x);
      CHECK(r.w(x, t) * c * c == doctest::Approx(r.v(g.psi, t)).epsilon(1e-11));
      CHECK(g.u * g.v == doctest::Approx(1.0));
      CHECK(g.U * g.w == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("curvature blows up at extinction") {
  const auto s = AncientSolution::contracting_sphere();
  const auto r = AncientSolution::rosenau(1.0);
  CHECK(s.max_R(-1e-3) * 1e-3 == doctest::Approx(1.0));
  CHECK(s.max_R(-1e-3) > 999.0);
  CHECK(r.max_R(-1e-3) >= 4 * hyp::coth(4e-3));
  CHECK(r.max_R(-1e-3) > 200.0);
}
