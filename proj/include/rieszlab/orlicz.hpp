// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "rieszlab/grid.hpp"
#include "rieszlab/numeric.hpp"

namespace rieszlab::orlicz {

struct Power {
  double p;
};
// t log(e + t)
struct LLogL {};
// (t / log^gamma(m + t))^q
struct PowerOverLog {
  double q;
  double gamma;
  double m = std::numbers::e;
};
// e^t - 1
struct ExpMinusOne {};
struct Custom {
  ScalarMap fn;
  std::string name = "custom";
};

using Family = std::variant<Power, LLogL, PowerOverLog, ExpMinusOne, Custom>;

// An Orlicz function H = coefficient * family(t).  Immutable value type; the
// Delta2 constant is optional cached metadata.
class OrliczFunction {
 public:
  explicit OrliczFunction(Family family, double coefficient = 1.0);

  static OrliczFunction power(double p, double coefficient = 1.0);
  static OrliczFunction llogl();
  static OrliczFunction power_over_log(double q, double gamma, double m = std::numbers::e);
  static OrliczFunction exp_minus_one();
  static OrliczFunction custom(ScalarMap fn, std::string name = "custom");

  double operator()(double t) const;

  const Family& family() const { return family_; }
  double coefficient() const { return coefficient_; }
  std::optional<double> delta2_constant() const { return delta2_constant_; }
  std::string describe() const;

  OrliczFunction scaled(double c) const;
  OrliczFunction with_delta2_estimate(std::span<const double> grid) const;

 private:
  Family family_;
  double coefficient_;
  std::optional<double> delta2_constant_;
};

// H(t); rejects negative or non-finite t.
double eval_H(const OrliczFunction& H, double t);

struct PropertyCheck {
  bool pass = true;
  std::optional<double> witness;
  std::string detail;
};

// Sampled check of the five N-function properties:
// (1) continuity, (2) strict increase, (3) convexity, (4) H(t)/t -> 0 at 0 and
// -> infinity at infinity, (5) H(t)/t strictly increasing.
struct NFunctionReport {
  std::array<PropertyCheck, 5> properties;
  double low_slope = 0.0;   // d log(H(t)/t) / d log t over the lowest decade
  double high_slope = 0.0;  // same over the highest evaluated decade
  double range_max = 0.0;   // largest grid node where H is finite
  bool all_pass() const;
};

NFunctionReport n_function_check(const OrliczFunction& H, std::span<const double> grid);

// sup_t H(2t)/H(t); exact 2^p for the Power family.
SupEstimate delta2_estimate(const OrliczFunction& H, std::span<const double> grid);

struct TailSum {
  double partial = 0.0;     // sum_{j=1..J} H(2^-j)
  double last_block = 0.0;  // sum over j in [J/2, J]
  bool converged = false;
};

TailSum h_tail_summable(const OrliczFunction& H, int J = 64, double threshold = 1e-6);

struct NormResult {
  double value = 0.0;
  int iterations = 0;
  double lo = 0.0;
  double hi = 0.0;
  bool converged = false;
};

struct LuxemburgOptions {
  double rel_tol = 1e-12;
  int max_iterations = 200;
  int max_doublings = 200;
};

// inf{lambda > 0 : sum_cells H(|u|/lambda) cellvol <= 1}, by bracketing and
// bisection on the monotone modular.
NormResult luxemburg_norm(const GridField& u, const OrliczFunction& H, const LuxemburgOptions& opts = {});

// The same on raw cell values (off-mask entries must be zero).
NormResult luxemburg_norm(std::span<const double> values, double cellvol, const OrliczFunction& H,
                          const LuxemburgOptions& opts = {});

// sum_cells H(|u|) cellvol
double modular(std::span<const double> values, double cellvol, const OrliczFunction& H, double lambda = 1.0);

}  // namespace rieszlab::orlicz
