// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>

#include "rieszlab/numeric.hpp"
#include "rieszlab/orlicz.hpp"

namespace rieszlab::kernels {

// phi(t) = t^alpha / log^beta(e + 1/t)
struct PowerOverLog {
  double alpha;
  double beta = 0.0;
};
struct Identity {};
struct Custom {
  ScalarMap fn;
  ScalarMap inverse;
  std::string name = "custom";
};

using Family = std::variant<PowerOverLog, Identity, Custom>;

// Kernel shape phi of the modified potential.  phi(0) is taken as 0.
class PhiKernel {
 public:
  explicit PhiKernel(Family family);

  static PhiKernel identity() { return PhiKernel(Identity{}); }
  static PhiKernel power(double alpha) { return PhiKernel(PowerOverLog{alpha, 0.0}); }
  static PhiKernel power_over_log(double alpha, double beta) { return PhiKernel(PowerOverLog{alpha, beta}); }
  static PhiKernel custom(ScalarMap fn, ScalarMap inverse, std::string name = "custom");

  double operator()(double t) const;
  // Monotone inverse; bisection for PowerOverLog.
  double inverse(double s) const;

  const Family& family() const { return family_; }
  std::optional<double> c_phi() const { return c_phi_; }
  PhiKernel with_control_estimate(std::span<const double> grid) const;
  std::string describe() const;

  // Leading power alpha where the family has one (1 for Identity).
  std::optional<double> alpha() const;
  // True for t^alpha with no log factor (including Identity).
  bool is_pure_power() const;

 private:
  Family family_;
  std::optional<double> c_phi_;
};

// delta(t) = t^(-p/n), or a custom positive map.
class DeltaMap {
 public:
  static DeltaMap exponent(double p, int n);
  static DeltaMap custom(ScalarMap fn, std::string name = "custom");

  double operator()(double t) const;
  std::string describe() const { return name_; }

 private:
  DeltaMap(ScalarMap fn, std::string name) : fn_(std::move(fn)), name_(std::move(name)) {}
  ScalarMap fn_;
  std::string name_;
};

struct PhiShape {
  bool increasing = true;
  bool vanishes_at_zero = true;
  std::optional<double> witness;
};

// Sampled check that phi is strictly increasing and tends to 0 at the low end.
PhiShape phi_shape_check(const PhiKernel& phi, std::span<const double> grid);

// sup over t1 <= t2 of (phi(t1)/t1) / (phi(t2)/t2), via a suffix minimum.
// Unbounded when trimming one decade at either end changes the sup by more
// than a factor 1.5.
SupEstimate varphi_control_estimate(const PhiKernel& phi, std::span<const double> grid);

// sup phi(2t)/phi(t); exact 2^alpha for pure powers.
SupEstimate phi_delta2_estimate(const PhiKernel& phi, std::span<const double> grid);

struct HSeries {
  double partial = 0.0;     // sum over the computed terms
  double tail_bound = 0.0;  // +inf when the term ratios do not contract
  bool diverges = false;
  int terms = 0;            // terms actually summed
};

// sum_{k=1..K} (2^-k t)^n / phi(2^-k t)^(n-1), compensated summation.  Stops
// early once the term ratio has stayed >= 1 - 1e-9 for 16 terms.
HSeries h_series(const PhiKernel& phi, int n, double t, int K = 512);

// t^(n + (1-n) alpha) log^(beta (n-1))(e + 1/t)
double closed_form_h(double alpha, double beta, int n, double t);

// Largest exponent p with p < n / (n - alpha (n-1)).
double admissible_p_max(double alpha, int n);

struct SumConditionOptions {
  int max_extensions = 4;
  double growth = 0.01;  // relative increase per extended decade counted as growth
};

struct SumCondition {
  double value = 0.0;
  double argmax = 0.0;
  bool unbounded = false;
  int extensions = 0;
  double lo = 0.0;  // final sweep range
  double hi = 0.0;
};

// sup_t H(h(delta(t)) t + phi(delta(t))^(1-n) delta(t)^(n(1-1/p))) / t^p over a
// log grid covering at least 12 decades, with endpoint probing by decade
// extension.
SumCondition sum_condition_sup(const orlicz::OrliczFunction& H, const PhiKernel& phi, const ScalarMap& h,
                               const DeltaMap& delta, double p, int n, std::span<const double> t_grid,
                               const SumConditionOptions& opts = {});

}  // namespace rieszlab::kernels
