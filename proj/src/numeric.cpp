// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "rieszlab/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rieszlab/error.hpp"

namespace rieszlab {

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2) {
    throw InputError("log_grid: need 0 < lo < hi and at least two points");
  }
  std::vector<double> grid(points);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < points; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(points - 1);
    grid[i] = std::pow(10.0, a + (b - a) * s);
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<double> default_log_grid() { return log_grid(1e-8, 1e8, 97); }

SupEstimate doubling_sup(const ScalarMap& f, std::span<const double> grid) {
  if (grid.empty()) throw InputError("doubling_sup: empty grid");
  SupEstimate out;
  std::vector<double> ts;
  std::vector<double> ratios;
  for (double t : grid) {
    if (!(t > 0.0)) throw InputError("doubling_sup: grid must be positive");
    const double ft = f(t);
    if (std::isinf(ft)) break;
    if (ft == 0.0) {
      std::ostringstream msg;
      msg << "function vanishes at t = " << t << " > 0";
      throw NumericError(msg.str());
    }
    const double ratio = f(2.0 * t) / ft;
    if (std::isinf(ratio)) {
      out.value = std::numeric_limits<double>::infinity();
      out.argmax = t;
      out.unbounded = true;
      return out;
    }
    ts.push_back(t);
    ratios.push_back(ratio);
  }
  if (ts.empty()) throw NumericError("doubling_sup: function overflows on the whole grid");

  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ratios[i] > out.value || i == 0) {
      out.value = ratios[i];
      out.argmax = ts[i];
    }
  }

  // Decade-growth heuristic at the top end.
  const double top = ts.back();
  double sup_top = 0.0;
  double sup_prev = 0.0;
  bool have_prev = false;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] >= top / 10.0) {
      sup_top = std::max(sup_top, ratios[i]);
    } else if (ts[i] >= top / 100.0) {
      sup_prev = std::max(sup_prev, ratios[i]);
      have_prev = true;
    }
  }
  if (have_prev && sup_prev > 0.0 && sup_top / sup_prev > 1.5) out.unbounded = true;
  return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
  for (auto& s : s_) s = splitmix64(seed);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

}  // namespace rieszlab
