// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "rieszlab/domains.hpp"
#include "rieszlab/error.hpp"
#include "rieszlab/grid.hpp"
#include "rieszlab/numeric.hpp"
#include "rieszlab/orlicz.hpp"

using namespace rieszlab;
using orlicz::OrliczFunction;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

GridField random_field(const Discretization& d, std::uint64_t seed, double amp = 1.0) {
  Rng rng(seed);
  GridField u = GridField::zeros(d);
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    if (u.masked(i)) u.values[i] = amp * rng.uniform(-1.0, 1.0);
  }
  return u;
}

}  // namespace

TEST_CASE("eval_H on closed-form families") {
  CHECK(orlicz::eval_H(OrliczFunction::power(2), 2.0) == 4.0);
  CHECK(orlicz::eval_H(OrliczFunction::llogl(), 1.0) == doctest::Approx(1.3132616875182228).epsilon(1e-14));
  CHECK(orlicz::eval_H(OrliczFunction::exp_minus_one(), 1.0) == doctest::Approx(std::numbers::e - 1).epsilon(1e-14));
  // (t / log^gamma(m + t))^q at t = 1, m = e, gamma = 1, q = 2
  const double want = std::pow(1.0 / std::log(std::numbers::e + 1.0), 2.0);
  CHECK(orlicz::eval_H(OrliczFunction::power_over_log(2, 1), 1.0) == doctest::Approx(want).epsilon(1e-14));
  CHECK(orlicz::eval_H(OrliczFunction::power(3, 0.5), 2.0) == 4.0);
}

TEST_CASE("every family vanishes at zero") {
  for (const auto& H : {OrliczFunction::power(1.5), OrliczFunction::llogl(), OrliczFunction::power_over_log(1.7, 1),
                        OrliczFunction::exp_minus_one(),
                        OrliczFunction::custom([](double t) { return t * t * t; })}) {
    CHECK(orlicz::eval_H(H, 0.0) == 0.0);
  }
}

TEST_CASE("eval_H rejects bad arguments") {
  const auto H = OrliczFunction::power(2);
  CHECK_THROWS_AS(orlicz::eval_H(H, -1.0), InputError);
  CHECK_THROWS_AS(orlicz::eval_H(H, std::numeric_limits<double>::infinity()), InputError);
  CHECK_THROWS_AS(orlicz::eval_H(H, std::numeric_limits<double>::quiet_NaN()), InputError);
}

TEST_CASE("constructor validates family parameters") {
  CHECK_THROWS_AS(OrliczFunction::power(0.0), InputError);
  CHECK_THROWS_AS(OrliczFunction::power_over_log(0.0, 1.0), InputError);
  CHECK_THROWS_AS(OrliczFunction::power_over_log(2.0, 1.0, 2.0), InputError);
  CHECK_THROWS_AS(OrliczFunction::power(2.0, 0.0), InputError);
  CHECK_THROWS_AS(OrliczFunction::custom(nullptr), InputError);
  CHECK_NOTHROW(OrliczFunction::power_over_log(2.0, 1.0, 3.0));
}

TEST_CASE("n_function_check outcomes") {
  const auto grid = default_log_grid();
  SUBCASE("Power(2) passes all five") {
    auto rep = orlicz::n_function_check(OrliczFunction::power(2), grid);
    CHECK(rep.all_pass());
    CHECK(rep.low_slope == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.high_slope == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("Power(1) fails the limit and slope properties") {
    auto rep = orlicz::n_function_check(OrliczFunction::power(1), grid);
    CHECK(rep.properties[0].pass);
    CHECK(rep.properties[1].pass);
    CHECK(rep.properties[2].pass);
    CHECK_FALSE(rep.properties[3].pass);
    CHECK_FALSE(rep.properties[4].pass);
    CHECK_FALSE(rep.all_pass());
  }
  SUBCASE("exp(t) - 1 fails the limit at zero") {
    auto rep = orlicz::n_function_check(OrliczFunction::exp_minus_one(), grid);
    CHECK_FALSE(rep.properties[3].pass);
    CHECK(rep.properties[3].witness.has_value());
    CHECK(rep.range_max < 1e3);
  }
  SUBCASE("LLogL fails only the limit at zero") {
    // t log(e + t) / t tends to 1, not 0
    const auto rep = orlicz::n_function_check(OrliczFunction::llogl(), grid);
    CHECK(rep.properties[0].pass);
    CHECK(rep.properties[1].pass);
    CHECK(rep.properties[2].pass);
    CHECK_FALSE(rep.properties[3].pass);
    for (std::size_t i = 4; i < rep.properties.size(); ++i) CHECK(rep.properties[i].pass);
  }
  SUBCASE("a concave map fails convexity") {
    auto rep = orlicz::n_function_check(OrliczFunction::custom([](double t) { return std::sqrt(t); }), grid);
    CHECK_FALSE(rep.properties[2].pass);
  }
}

TEST_CASE("delta2_estimate") {
  const auto grid = default_log_grid();
  for (double p : {1.0, 1.5, 2.0, 6.0}) {
    auto est = orlicz::delta2_estimate(OrliczFunction::power(p), grid);
    CHECK(est.value == std::pow(2.0, p));
    CHECK_FALSE(est.unbounded);
  }
  auto ll = orlicz::delta2_estimate(OrliczFunction::llogl(), grid);
  CHECK_FALSE(ll.unbounded);
  CHECK(ll.value <= 4.0);
  // Independent sweep of 2 log(e + 2t) / log(e + t).
  double sweep = 0.0;
  for (double t : grid) sweep = std::max(sweep, 2.0 * std::log(std::numbers::e + 2 * t) / std::log(std::numbers::e + t));
  CHECK(ll.value == doctest::Approx(sweep).epsilon(1e-12));
  CHECK(orlicz::delta2_estimate(OrliczFunction::exp_minus_one(), grid).unbounded);
  CHECK_THROWS_AS(orlicz::delta2_estimate(OrliczFunction::custom([](double t) { return t < 1 ? 0.0 : t; }), grid),
                  NumericError);
}

TEST_CASE("with_delta2_estimate caches the constant") {
  auto H = OrliczFunction::power(3).with_delta2_estimate(default_log_grid());
  REQUIRE(H.delta2_constant().has_value());
  CHECK(*H.delta2_constant() == 8.0);
}

TEST_CASE("dyadic tail sums") {
  auto p2 = orlicz::h_tail_summable(OrliczFunction::power(2));
  CHECK(p2.partial == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(p2.converged);
  auto p1 = orlicz::h_tail_summable(OrliczFunction::power(1));
  CHECK(p1.partial == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p1.converged);
  auto custom = orlicz::h_tail_summable(
      OrliczFunction::custom([](double t) { return t > 0 ? t / std::log(std::numbers::e + 1.0 / t) : 0.0; }));
  CHECK(custom.converged);
  double direct = 0.0;
  for (int j = 1; j <= 64; ++j) {
    const double t = std::ldexp(1.0, -j);
    direct += t / std::log(std::numbers::e + 1.0 / t);
  }
  CHECK(custom.partial == doctest::Approx(direct).epsilon(1e-13));
  CHECK_THROWS_AS(orlicz::h_tail_summable(OrliczFunction::power(2), 16), InputError);
  // H(t) = 1 / log(1/t) is not summable along 2^-j.
  auto slow = orlicz::h_tail_summable(
      OrliczFunction::custom([](double t) { return t > 0 && t < 1 ? 1.0 / std::log(1.0 / t) : t; }));
  CHECK_FALSE(slow.converged);
}

TEST_CASE("Luxemburg norm closed forms") {
  const auto d = discretize(domains::unit_cube(2), 32);
  SUBCASE("zero field") {
    auto r = orlicz::luxemburg_norm(GridField::zeros(d), OrliczFunction::power(2));
    CHECK(r.value == 0.0);
    CHECK(r.converged);
    CHECK(llogl_norm(GridField::zeros(d)) == 0.0);
  }
  SUBCASE("c times an indicator") {
    const auto ball = domains::ball_domain(2, {0.5, 0.5, 0.0}, 0.3);
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      for (double c : {0.01, 1.0, 7.0, 1e4}) {
        GridField u = GridField::sample(d, [&](const Point& x) { return ball.inside(x) ? c : 0.0; });
        std::size_t count = 0;
        for (std::size_t i = 0; i < u.values.size(); ++i) count += u.values[i] != 0.0;
        const double V = static_cast<double>(count) * d.grid.cellvol();
        auto r = orlicz::luxemburg_norm(u, OrliczFunction::power(p));
        CHECK(r.converged);
        CHECK(rel(r.value, c * std::pow(V, 1.0 / p)) < 1e-10);
        CHECK(r.lo <= r.value);
        CHECK(r.value <= r.hi);
      }
    }
  }
}

TEST_CASE("Luxemburg norm properties on seeded fields") {
  const auto d = discretize(domains::unit_cube(2), 24);
  const std::vector<OrliczFunction> Hs{OrliczFunction::power(1.5), OrliczFunction::llogl(),
                                       OrliczFunction::power_over_log(5.0 / 3.0, 1.0)};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GridField u = random_field(d, seed, 3.0);
    for (const auto& H : Hs) {
      const double n1 = orlicz::luxemburg_norm(u, H).value;
      SUBCASE("homogeneity") {
        for (double c : {0.5, 2.0, 1e3}) CHECK(rel(orlicz::luxemburg_norm(u.scaled(c), H).value, c * n1) < 1e-10);
      }
      SUBCASE("monotonicity") {
        GridField v = u.abs();
        Rng rng(seed + 100);
        for (auto& x : v.values) x *= 1.0 + rng.uniform();
        CHECK(n1 <= orlicz::luxemburg_norm(v, H).value + 1e-12);
      }
      SUBCASE("unit ball") {
        const GridField w = u.scaled(0.999 / n1);
        CHECK(orlicz::modular(w.values, d.grid.cellvol(), H) <= 1.0 + 1e-9);
        const GridField at = u.scaled(1.0 / n1);
        CHECK(orlicz::modular(at.values, d.grid.cellvol(), H) == doctest::Approx(1.0).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("Luxemburg norm with Power(p) equals the Lp norm") {
  const auto d = discretize(domains::unit_cube(2), 32);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const GridField u = random_field(d, seed);
    for (double p : {1.0, 1.25, 2.0, 4.0}) {
      CHECK(rel(orlicz::luxemburg_norm(u, OrliczFunction::power(p)).value, lp_norm(u, p)) < 1e-10);
    }
  }
}

TEST_CASE("Luxemburg norm reports bracketing failure") {
  std::vector<double> huge{1e300, 1e300};
  CHECK_THROWS_AS(orlicz::luxemburg_norm(huge, 1e300, OrliczFunction::exp_minus_one()), NumericError);
}

TEST_CASE("describe names the family") {
  CHECK(OrliczFunction::power(2).describe().find("t^2") != std::string::npos);
  CHECK(OrliczFunction::llogl().describe().find("log") != std::string::npos);
}
