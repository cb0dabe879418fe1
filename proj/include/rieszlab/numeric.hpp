// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rieszlab {

using ScalarMap = std::function<double(double)>;

// `points` nodes spaced evenly in log10 between lo and hi (both included).
std::vector<double> log_grid(double lo, double hi, std::size_t points);

// The default sweep: 97 nodes over [1e-8, 1e8], i.e. 6 per decade.
std::vector<double> default_log_grid();

// Result of a supremum taken over a finite sweep.
struct SupEstimate {
  double value = 0.0;
  double argmax = 0.0;
  bool unbounded = false;
};

// sup over the grid of f(2t)/f(t).  Flags `unbounded` when a ratio is
// infinite or when the sup over the top decade exceeds the sup over the
// decade below by more than a factor 1.5.  Nodes where f(t) overflows are
// dropped.  Throws NumericError when f(t) == 0 at some t > 0.
SupEstimate doubling_sup(const ScalarMap& f, std::span<const double> grid);

// Deterministic, library-independent uniform generator (splitmix64 seeding a
// xoshiro256** stream).  Used for seeded test fields so that outputs do not
// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  double uniform();  // [0, 1)
  double uniform(double lo, double hi);

 private:
  std::uint64_t s_[4];
};

}  // namespace rieszlab
