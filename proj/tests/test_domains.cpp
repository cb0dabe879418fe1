// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <string>

#include "rieszlab/domains.hpp"
#include "rieszlab/error.hpp"
#include "rieszlab/grid.hpp"
#include "rieszlab/kernels.hpp"
#include "rieszlab/numeric.hpp"
#include "rieszlab/orlicz.hpp"

using namespace rieszlab;
using domains::MushroomSpec;
using kernels::PhiKernel;

namespace {

MushroomSpec spec(int dim, PhiKernel phi, int first, int count) {
  MushroomSpec s;
  s.dim = dim;
  s.phi = phi;
  s.first_index = first;
  s.count = count;
  return s;
}

}  // namespace

TEST_CASE("radius sequence") {
  domains::RadiusSequence r;
  CHECK(r.at(1) == 0.5);
  CHECK(r.at(30) == std::ldexp(1.0, -30));
  domains::RadiusSequence q{0.8, 0.25};
  CHECK(q.at(2) == doctest::Approx(0.05));
}

TEST_CASE("mushroom layout") {
  const auto s = spec(2, PhiKernel::identity(), 2, 2);
  const auto slots = domains::mushroom_layout(s);
  REQUIRE(slots.size() == 2);
  CHECK(slots[0].index == 2);
  CHECK(slots[0].cap_lo == 0.0);
  CHECK(slots[0].r == 0.25);
  CHECK(slots[0].width == 0.25);
  CHECK(slots[1].cap_lo == doctest::Approx(0.625));
  CHECK(slots[1].r == 0.125);
  // caps are pairwise disjoint
  CHECK(slots[0].cap_lo + 2 * slots[0].r < slots[1].cap_lo);
}

TEST_CASE("mushroom overflow names the feasible count") {
  try {
    domains::mushroom_layout(spec(2, PhiKernel::identity(), 1, 2));
    FAIL("expected an overflow error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("at most 1") != std::string::npos);
  }
  CHECK_NOTHROW(domains::mushroom_layout(spec(2, PhiKernel::identity(), 3, 3)));
}

TEST_CASE("mushroom spec invariants are enforced") {
  // phi(r) > r for r < 1 when phi = sqrt
  auto bad = spec(2, PhiKernel::custom([](double t) { return std::sqrt(t); }, [](double s) { return s * s; }), 2, 1);
  CHECK_THROWS_AS(domains::mushroom_layout(bad), InputError);
  auto s = spec(2, PhiKernel::identity(), 2, 1);
  s.radii.ratio = 1.5;
  CHECK_THROWS_AS(domains::mushroom_layout(s), InputError);
}

TEST_CASE("mushroom membership") {
  const auto s = spec(2, PhiKernel::identity(), 2, 2);
  const auto G = domains::mushroom_build(s);
  const auto slots = domains::mushroom_layout(s);
  CHECK(G.inside({0.5, 0.5, 0}));
  const double r = slots[0].r;
  const Point cap{slots[0].center(), 1 + r + r, 0};
  CHECK(G.inside(cap));
  CHECK(G.inside({cap[0], 1.0 - cap[1], 0}));
  // on the face x2 = 1 between the two mushrooms
  CHECK_FALSE(G.inside({0.56, 1.0, 0}));
  // on the face x2 = 1 under a neck
  CHECK(G.inside({slots[0].center(), 1.0, 0}));
  CHECK(G.inside({slots[1].center(), 0.0, 0}));
  // beside a neck, below the cap
  CHECK_FALSE(G.inside({slots[0].center() + 0.6 * slots[0].width, 1.0 + 0.5 * r, 0}));
  // above the cap
  CHECK_FALSE(G.inside({cap[0], 1.0 + 3 * r + 1e-9, 0}));
  REQUIRE(G.reference_ball.has_value());
  CHECK(G.reference_ball->radius == 0.5);
}

TEST_CASE("mushroom membership is symmetric under reflection") {
  for (int dim : {2, 3}) {
    const auto s = spec(dim, PhiKernel::power(1.2), 2, 2);
    const auto G = domains::mushroom_build(s);
    Rng rng(77);
    int inside = 0;
    for (int i = 0; i < 20000; ++i) {
      Point p{rng.uniform(-0.1, 1.1), rng.uniform(G.bbox.lo[1], G.bbox.hi[1]), dim == 3 ? rng.uniform(-0.1, 1.1) : 0.0};
      const Point q{p[0], 1.0 - p[1], p[2]};
      CHECK(G.inside(p) == G.inside(q));
      inside += G.inside(p);
    }
    CHECK(inside > 1000);
  }
}

TEST_CASE("mushroom discretization resolves the cap and neck") {
  const auto s = spec(2, PhiKernel::identity(), 2, 1);
  const auto d = domains::mushroom_discretize(s, 128, 2);
  const auto slot = domains::mushroom_layout(s)[0];
  // neck walls fall on cell faces
  const double h = d.grid.spacing(0);
  const double wall = (slot.center() - 0.5 * slot.width - d.grid.bbox().lo[0]) / h;
  CHECK(std::abs(wall - std::round(wall)) < 1e-9);
  bool cap = false, mirror = false;
  for (std::size_t i = 0; i < d.grid.size(); ++i) {
    if (!d.mask[i]) continue;
    const auto c = d.grid.center(i);
    cap = cap || c[1] > 1.0 + 1.5 * slot.r;
    mirror = mirror || c[1] < -1.5 * slot.r;
  }
  CHECK(cap);
  CHECK(mirror);
  CHECK_THROWS_AS(domains::mushroom_discretize(s, 128, 5), InputError);
}

TEST_CASE("counterexample height") {
  for (int k = 1; k <= 20; ++k) {
    const auto s = spec(2, PhiKernel::identity(), 1, 1);
    CHECK(domains::counterexample_height(s, k, 1.0) == doctest::Approx(std::ldexp(1.0, k - 1)).epsilon(1e-14));
  }
}

TEST_CASE("counterexample gradient modular is one") {
  for (int dim : {2, 3}) {
    for (double alpha : {1.0, 1.2}) {
      for (double p : {1.0, 1.5, 2.0}) {
        const auto s = spec(dim, PhiKernel::power(alpha), 1, 1);
        for (int k = 1; k <= 30; ++k) {
          CHECK(domains::counterexample_gradient_modular(s, k, p) == doctest::Approx(1.0).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("counterexample field on the grid") {
  for (int dim : {2, 3}) {
    for (double p : {1.0, 1.5}) {
      const int k = 2;
      const auto s = spec(dim, PhiKernel::identity(), k, 1);
      const auto d = domains::mushroom_discretize(s, dim == 2 ? 256 : 48, k);
      const auto ce = domains::counterexample_field(s, d, k, p);
      CHECK(ce.F == domains::counterexample_height(s, k, p));
      CHECK(std::abs(domain_average(ce.u)) < 1e-12);
      CHECK(ce.u.max_abs() == doctest::Approx(ce.F));
      // exact gradient field integrates to 1 once the neck is cell aligned
      CHECK(std::pow(lp_norm(ce.grad, p), p) == doctest::Approx(1.0).epsilon(0.05));
      // finite differences of u agree
      CHECK(lp_norm(gradient_magnitude(ce.u), p) == doctest::Approx(1.0).epsilon(0.05));
    }
  }
}

TEST_CASE("divergence profile") {
  const auto H2 = orlicz::OrliczFunction::power(2);
  const auto prof = domains::divergence_profile(2, PhiKernel::power(1.2), {}, 1.0, H2, 30);
  REQUIRE(prof.E.size() == 30);
  for (std::size_t i = 0; i < prof.E.size(); ++i) {
    const int k = prof.k[i];
    // 2 r^2 H(F), F = (1 / (2 r^1.2)), r = 2^-k, by direct substitution
    const double r = std::ldexp(1.0, -k);
    const double F = 1.0 / (2.0 * std::pow(r, 1.2));
    CHECK(prof.E[i] == doctest::Approx(2 * r * r * F * F).epsilon(1e-12));
    CHECK(prof.E[i] == doctest::Approx(std::pow(2.0, 0.4 * k - 1)).epsilon(1e-12));
    if (i > 0) CHECK(std::abs(prof.E[i] / prof.E[i - 1] - std::pow(2.0, 0.4)) < 1e-9);
  }
  CHECK(prof.verdict == "diverges");
  const auto tame = domains::divergence_profile(2, PhiKernel::power(1.2), {}, 1.0, orlicz::OrliczFunction::power(1.5), 30);
  CHECK(tame.verdict == "bounded");
  CHECK(tame.E.back() < tame.E.front());
  CHECK_THROWS_AS(domains::divergence_profile(2, PhiKernel::identity(), {}, 1.0, H2, 1), InputError);
}
