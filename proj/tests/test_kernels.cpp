// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "rieszlab/error.hpp"
#include "rieszlab/kernels.hpp"
#include "rieszlab/numeric.hpp"
#include "rieszlab/orlicz.hpp"

using namespace rieszlab;
using kernels::PhiKernel;
using orlicz::OrliczFunction;

TEST_CASE("kernel evaluation and inverse") {
  CHECK(PhiKernel::identity()(0.25) == 0.25);
  CHECK(PhiKernel::identity()(0.0) == 0.0);
  CHECK(PhiKernel::power(1.5)(4.0) == doctest::Approx(8.0).epsilon(1e-15));
  const double want = std::pow(0.5, 1.2) / std::log(std::numbers::e + 2.0);
  CHECK(PhiKernel::power_over_log(1.2, 1.0)(0.5) == doctest::Approx(want).epsilon(1e-14));
  for (const auto& phi : {PhiKernel::power(1.2), PhiKernel::power_over_log(1.2, 1.0), PhiKernel::identity()}) {
    for (double t : {1e-6, 0.01, 0.3, 1.0, 50.0}) {
      CHECK(phi.inverse(phi(t)) == doctest::Approx(t).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(PhiKernel::power(0.0), InputError);
  CHECK_THROWS_AS(PhiKernel::power_over_log(1.0, -1.0), InputError);
}

TEST_CASE("delta map") {
  auto d = kernels::DeltaMap::exponent(1.5, 3);
  CHECK(d(8.0) == doctest::Approx(std::pow(8.0, -0.5)).epsilon(1e-15));
  CHECK_THROWS_AS(kernels::DeltaMap::exponent(0.0, 2), InputError);
}

TEST_CASE("shape check") {
  const auto grid = default_log_grid();
  auto ok = kernels::phi_shape_check(PhiKernel::power_over_log(1.1, 2.0), grid);
  CHECK(ok.increasing);
  CHECK(ok.vanishes_at_zero);
  auto flat = kernels::phi_shape_check(
      PhiKernel::custom([](double t) { return 1.0 + t; }, [](double s) { return s - 1.0; }), grid);
  CHECK_FALSE(flat.vanishes_at_zero);
}

TEST_CASE("varphi control estimate") {
  const auto grid = default_log_grid();
  CHECK(kernels::varphi_control_estimate(PhiKernel::identity(), grid).value == 1.0);
  for (double a : {1.0, 1.2, 1.5, 2.0}) {
    auto e = kernels::varphi_control_estimate(PhiKernel::power(a), grid);
    CHECK(e.value == 1.0);
    CHECK_FALSE(e.unbounded);
  }
  const auto unit = log_grid(1e-8, 1.0, 49);
  auto root = kernels::varphi_control_estimate(
      PhiKernel::custom([](double t) { return std::sqrt(t); }, [](double s) { return s * s; }, "sqrt"), unit);
  CHECK(root.unbounded);
  auto logk = kernels::varphi_control_estimate(PhiKernel::power_over_log(1.0, 1.0), grid);
  CHECK_FALSE(logk.unbounded);
  CHECK(std::isfinite(logk.value));
  CHECK(PhiKernel::power(1.3).with_control_estimate(grid).c_phi() == 1.0);
}

TEST_CASE("phi doubling constant") {
  const auto grid = default_log_grid();
  CHECK(kernels::phi_delta2_estimate(PhiKernel::identity(), grid).value == 2.0);
  CHECK(kernels::phi_delta2_estimate(PhiKernel::power(1.2), grid).value == std::pow(2.0, 1.2));
  auto lg = kernels::phi_delta2_estimate(PhiKernel::power_over_log(1.0, 1.0), grid);
  CHECK_FALSE(lg.unbounded);
  double sweep = 0.0;
  const PhiKernel phi = PhiKernel::power_over_log(1.0, 1.0);
  for (double t : grid) sweep = std::max(sweep, phi(2 * t) / phi(t));
  CHECK(lg.value == doctest::Approx(sweep).epsilon(1e-12));
  CHECK(lg.value > 2.0);
  CHECK(lg.value < 3.0);
}

TEST_CASE("h series for the identity kernel is t") {
  for (int n : {2, 3, 5}) {
    for (double t : {0.1, 1.0, 10.0}) {
      for (int K : {64, 128, 512}) {
        auto s = kernels::h_series(PhiKernel::identity(), n, t, K);
        CHECK_FALSE(s.diverges);
        CHECK(std::abs(s.partial - t) <= std::ldexp(t, -K));
        CHECK(s.tail_bound <= std::ldexp(t, -K + 1));
      }
    }
  }
}

TEST_CASE("h series diverges at the endpoint exponent") {
  for (int n : {2, 3, 4}) {
    const double alpha = 1.0 + 1.0 / (n - 1);
    auto s = kernels::h_series(PhiKernel::power(alpha), n, 1.0, 512);
    CHECK(s.diverges);
    CHECK(s.terms <= 128);
    CHECK(std::isinf(s.tail_bound));
  }
  auto below = kernels::h_series(PhiKernel::power(1.9), 2, 1.0, 512);
  CHECK_FALSE(below.diverges);
  // t^0.1 geometric: sum 2^-0.1k = 1 / (2^0.1 - 1)
  CHECK(below.partial + below.tail_bound >= 1.0 / (std::pow(2.0, 0.1) - 1.0) * (1 - 1e-12));
  CHECK_THROWS_AS(kernels::h_series(PhiKernel::identity(), 2, 1.0, 32), InputError);
  CHECK_THROWS_AS(kernels::h_series(PhiKernel::identity(), 2, -1.0), InputError);
}

TEST_CASE("closed form h") {
  CHECK(kernels::closed_form_h(1.0, 0.0, 2, 0.37) == doctest::Approx(0.37).epsilon(1e-15));
  CHECK(kernels::closed_form_h(1.0, 0.0, 3, 5.0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(kernels::closed_form_h(1.5, 0.0, 2, 4.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(kernels::closed_form_h(1.0, 1.0, 2, 1.0) == doctest::Approx(1.3132616875182228).epsilon(1e-14));
  CHECK_THROWS_AS(kernels::closed_form_h(2.0, 0.0, 2, 1.0), InputError);
  CHECK_THROWS_AS(kernels::closed_form_h(0.5, 0.0, 2, 1.0), InputError);
}

TEST_CASE("closed form h dominates the series with one fitted constant") {
  const auto coarse = log_grid(1e-6, 1e2, 17);
  const auto dense = log_grid(1e-6, 1e2, 801);
  for (int n : {2, 3}) {
    for (double alpha : {1.0, 1.2, 1.0 + 0.8 / (n - 1)}) {
      for (double beta : {0.0, 0.5, 1.0}) {
        CAPTURE(n);
        CAPTURE(alpha);
        CAPTURE(beta);
        const PhiKernel phi = PhiKernel::power_over_log(alpha, beta);
        double C = 0.0;
        for (double t : coarse) {
          C = std::max(C, kernels::h_series(phi, n, t).partial / kernels::closed_form_h(alpha, beta, n, t));
        }
        double worst = 0.0;
        for (double t : dense) {
          const auto s = kernels::h_series(phi, n, t);
          worst = std::max(worst, (s.partial + s.tail_bound) / (C * kernels::closed_form_h(alpha, beta, n, t)));
        }
        CHECK(worst < 1.05);
        if (beta == 0.0) {
          // pure powers: the series is an exact multiple of the closed form
          double lo = 1e300;
          for (double t : dense) {
            lo = std::min(lo, kernels::h_series(phi, n, t).partial / kernels::closed_form_h(alpha, 0.0, n, t));
          }
          CHECK(lo / C > 1.0 - 1e-12);
        }
      }
    }
  }
}

TEST_CASE("admissible exponent") {
  CHECK(kernels::admissible_p_max(1.2, 2) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(kernels::admissible_p_max(1.25, 3) == doctest::Approx(6.0).epsilon(1e-15));
  for (int n = 2; n <= 10; ++n) CHECK(kernels::admissible_p_max(1.0, n) == n);
  CHECK_THROWS_AS(kernels::admissible_p_max(2.0, 2), InputError);
  CHECK_THROWS_AS(kernels::admissible_p_max(1.5, 3), InputError);
}

namespace {

struct Preset {
  OrliczFunction H;
  PhiKernel phi;
  ScalarMap h;
  kernels::DeltaMap delta;
  double p;
  int n;
};

Preset sharp_log(double eps) {
  // n = 2, p = 1, alpha = 1.2, beta = 1: q = 2 / 1.2, gamma = 1
  const double alpha = 1.2, beta = 1.0;
  return Preset{OrliczFunction::power_over_log(2.0 / 1.2 + eps, 1.0), PhiKernel::power_over_log(alpha, beta),
                [=](double t) { return kernels::closed_form_h(alpha, beta, 2, t); },
                kernels::DeltaMap::exponent(1.0, 2), 1.0, 2};
}

kernels::SumCondition run(const Preset& s, const std::vector<double>& grid) {
  return kernels::sum_condition_sup(s.H, s.phi, s.h, s.delta, s.p, s.n, grid);
}

}  // namespace

TEST_CASE("compatibility condition on the sharp log family") {
  const auto grid = default_log_grid();
  auto ok = run(sharp_log(0.0), grid);
  CHECK_FALSE(ok.unbounded);
  CHECK(std::isfinite(ok.value));
  CHECK(ok.value > 0.0);
  CHECK(ok.lo == 1e-8);
  CHECK(ok.hi == 1e8);
  auto bad = run(sharp_log(0.5), grid);
  CHECK(bad.unbounded);
  CHECK(bad.extensions == 4);
}

TEST_CASE("compatibility condition on the classical family") {
  // phi = t^((n-a)/(n-1)), h = t^a, H = t^(np/(n-ap))
  for (int n : {2, 3}) {
    for (double a : {0.5, 1.0}) {
      for (double p : {1.2, 1.5}) {
        if (a * p >= n) continue;
        const double alpha = (n - a) / (n - 1.0);
        const PhiKernel phi = PhiKernel::power(alpha);
        const auto H = OrliczFunction::power(n * p / (n - a * p), (n - a * p) / (n * p));
        auto r = kernels::sum_condition_sup(H, phi, [a](double t) { return std::pow(t, a); },
                                            kernels::DeltaMap::exponent(p, n), p, n, default_log_grid());
        CHECK_FALSE(r.unbounded);
        CHECK(std::isfinite(r.value));
      }
    }
  }
}

TEST_CASE("compatibility sup scales with H") {
  const auto grid = default_log_grid();
  Preset s = sharp_log(0.0);
  const double base = run(s, grid).value;
  for (double c : {0.25, 3.0, 100.0}) {
    Preset t = s;
    t.H = s.H.scaled(c);
    CHECK(run(t, grid).value / base == doctest::Approx(c).epsilon(1e-9));
  }
}

TEST_CASE("compatibility sup rejects short grids") {
  CHECK_THROWS_AS(run(sharp_log(0.0), log_grid(1e-4, 1e4, 50)), InputError);
}
