// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "rieszlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "rieszlab/error.hpp"

namespace rieszlab::kernels {
namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

// Neumaier's variant of compensated summation.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

double phi_power_over_log(const PowerOverLog& f, double t) {
  const double base = std::pow(t, f.alpha);
  if (f.beta == 0.0) return base;
  return base / std::pow(std::log(std::numbers::e + 1.0 / t), f.beta);
}

void require_sorted_positive(std::span<const double> grid, const char* what) {
  if (grid.empty()) throw InputError(std::string(what) + ": empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) throw InputError(std::string(what) + ": grid must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw InputError(std::string(what) + ": grid must be strictly increasing");
  }
}

}  // namespace

PhiKernel::PhiKernel(Family family) : family_(std::move(family)) {
  if (const auto* f = std::get_if<PowerOverLog>(&family_)) {
    if (!(f->alpha > 0.0) || !std::isfinite(f->alpha)) throw InputError("phi: alpha must be positive");
    if (!(f->beta >= 0.0) || !std::isfinite(f->beta)) throw InputError("phi: beta must be >= 0");
  }
  if (const auto* f = std::get_if<Custom>(&family_)) {
    if (!f->fn || !f->inverse) throw InputError("custom phi needs both the map and its inverse");
  }
}

PhiKernel PhiKernel::custom(ScalarMap fn, ScalarMap inverse, std::string name) {
  return PhiKernel(Custom{std::move(fn), std::move(inverse), std::move(name)});
}

double PhiKernel::operator()(double t) const {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InputError("phi: argument must be finite and >= 0, got " + fmt(t));
  if (t == 0.0) return 0.0;
  if (std::holds_alternative<Identity>(family_)) return t;
  if (const auto* f = std::get_if<PowerOverLog>(&family_)) return phi_power_over_log(*f, t);
  return std::get<Custom>(family_).fn(t);
}

double PhiKernel::inverse(double s) const {
  if (!(s >= 0.0) || !std::isfinite(s)) throw InputError("phi inverse: argument must be finite and >= 0");
  if (s == 0.0) return 0.0;
  if (std::holds_alternative<Identity>(family_)) return s;
  if (const auto* c = std::get_if<Custom>(&family_)) return c->inverse(s);
  const auto& f = std::get<PowerOverLog>(family_);
  if (f.beta == 0.0) return std::pow(s, 1.0 / f.alpha);
  double lo = std::pow(s, 1.0 / f.alpha);  // phi(lo) <= s
  double hi = lo;
  while ((*this)(hi) < s) hi *= 2.0;
  while ((*this)(lo) > s) lo *= 0.5;
  for (int it = 0; it < 400 && (hi - lo) > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((*this)(mid) < s) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

PhiKernel PhiKernel::with_control_estimate(std::span<const double> grid) const {
  PhiKernel out = *this;
  const SupEstimate est = varphi_control_estimate(*this, grid);
  if (est.unbounded) {
    out.c_phi_.reset();
  } else {
    out.c_phi_ = est.value;
  }
  return out;
}

std::string PhiKernel::describe() const {
  if (std::holds_alternative<Identity>(family_)) return "t";
  if (const auto* c = std::get_if<Custom>(&family_)) return c->name;
  const auto& f = std::get<PowerOverLog>(family_);
  if (f.beta == 0.0) return "t^" + fmt(f.alpha);
  return "t^" + fmt(f.alpha) + "/log^" + fmt(f.beta) + "(e+1/t)";
}

std::optional<double> PhiKernel::alpha() const {
  if (std::holds_alternative<Identity>(family_)) return 1.0;
  if (const auto* f = std::get_if<PowerOverLog>(&family_)) return f->alpha;
  return std::nullopt;
}

bool PhiKernel::is_pure_power() const {
  if (std::holds_alternative<Identity>(family_)) return true;
  const auto* f = std::get_if<PowerOverLog>(&family_);
  return f && f->beta == 0.0;
}

DeltaMap DeltaMap::exponent(double p, int n) {
  if (!(p > 0.0) || n < 1) throw InputError("delta map: need p > 0 and n >= 1");
  const double e = -p / n;
  return DeltaMap([e](double t) { return std::pow(t, e); }, "t^(-" + fmt(p) + "/" + std::to_string(n) + ")");
}

DeltaMap DeltaMap::custom(ScalarMap fn, std::string name) {
  if (!fn) throw InputError("custom delta map needs a callable");
  return DeltaMap(std::move(fn), std::move(name));
}

double DeltaMap::operator()(double t) const {
  const double v = fn_(t);
  if (!(v > 0.0) || !std::isfinite(v)) throw NumericError("delta(t) must be positive and finite at t = " + fmt(t));
  return v;
}

PhiShape phi_shape_check(const PhiKernel& phi, std::span<const double> grid) {
  require_sorted_positive(grid, "phi_shape_check");
  PhiShape out;
  double prev = phi(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double v = phi(grid[i]);
    if (!(v > prev)) {
      out.increasing = false;
      out.witness = grid[i];
      break;
    }
    prev = v;
  }
  // phi(t) -> 0: the lowest decade must carry values well below those a
  // decade higher.
  std::size_t j = 0;
  while (j + 1 < grid.size() && grid[j] < 10.0 * grid[0]) ++j;
  const double low = phi(grid[0]);
  const double next = phi(grid[j]);
  if (!(low < next) || !(low < 1e-3 * std::max(next, 1.0))) out.vanishes_at_zero = false;
  return out;
}

SupEstimate varphi_control_estimate(const PhiKernel& phi, std::span<const double> grid) {
  require_sorted_positive(grid, "varphi_control_estimate");
  const std::size_t N = grid.size();
  std::vector<double> ratio(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double v = phi(grid[i]);
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw NumericError("varphi_control_estimate: phi(" + fmt(grid[i]) + ") is not positive");
    }
    ratio[i] = v / grid[i];
  }
  // sup over i <= j in [a, b) of ratio[i] / ratio[j].
  auto sup_on = [&](std::size_t a, std::size_t b, double* argmax) {
    double best = 0.0;
    double suffix_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = b; i-- > a;) {
      suffix_min = std::min(suffix_min, ratio[i]);
      const double q = ratio[i] / suffix_min;
      if (q >= best) {
        best = q;
        if (argmax) *argmax = grid[i];
      }
    }
    return best;
  };
  SupEstimate out;
  out.value = sup_on(0, N, &out.argmax);
  std::size_t a = 0;
  while (a < N && grid[a] < 10.0 * grid.front()) ++a;
  std::size_t b = N;
  while (b > a && grid[b - 1] > grid.back() / 10.0) --b;
  if (b > a + 1) {
    const double trimmed = sup_on(a, b, nullptr);
    if (out.value > 1.5 * trimmed) out.unbounded = true;
  }
  return out;
}

SupEstimate phi_delta2_estimate(const PhiKernel& phi, std::span<const double> grid) {
  if (phi.is_pure_power()) {
    require_sorted_positive(grid, "phi_delta2_estimate");
    return SupEstimate{std::exp2(*phi.alpha()), grid.front(), false};
  }
  return doubling_sup([&phi](double t) { return phi(t); }, grid);
}

HSeries h_series(const PhiKernel& phi, int n, double t, int K) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InputError("h_series: t must be positive and finite");
  if (K < 64) throw InputError("h_series: K must be >= 64");
  if (n < 2) throw InputError("h_series: n must be >= 2");
  constexpr double kUnit = 1.0 - 1e-9;
  constexpr int kSustain = 16;
  constexpr int kWindow = 8;

  HSeries out;
  CompensatedSum acc;
  std::vector<double> ratios;
  double prev = 0.0;
  int sustained = 0;
  for (int k = 1; k <= K; ++k) {
    const double s = std::ldexp(t, -k);
    const double ph = phi(s);
    if (!(ph > 0.0)) throw NumericError("h_series: phi vanishes at " + fmt(s));
    const double term = s * std::pow(s / ph, n - 1);
    if (!std::isfinite(term)) throw NumericError("h_series: non-finite term at s = " + fmt(s));
    acc.add(term);
    out.terms = k;
    if (term == 0.0) break;
    if (k > 1) {
      const double r = term / prev;
      ratios.push_back(r);
      sustained = r >= kUnit ? sustained + 1 : 0;
      // early exit only while the run is not decaying from its peak
      if (sustained >= kSustain &&
          r >= *std::max_element(ratios.end() - kSustain, ratios.end()) * kUnit) {
        out.diverges = true;
        break;
      }
    }
    prev = term;
  }
  out.partial = acc.value();
  if (!out.diverges && sustained >= kSustain) out.diverges = true;
  if (out.diverges) {
    out.tail_bound = std::numeric_limits<double>::infinity();
  } else if (prev == 0.0 || ratios.empty()) {
    out.tail_bound = 0.0;
  } else {
    const std::size_t from = ratios.size() > kWindow ? ratios.size() - kWindow : 0;
    const double rho = *std::max_element(ratios.begin() + static_cast<std::ptrdiff_t>(from), ratios.end());
    out.tail_bound = rho < 1.0 ? prev * rho / (1.0 - rho) : std::numeric_limits<double>::infinity();
  }
  return out;
}

double closed_form_h(double alpha, double beta, int n, double t) {
  if (n < 2) throw InputError("closed_form_h: n must be >= 2");
  if (!(alpha >= 1.0) || !(alpha * (n - 1) < n)) {
    throw InputError("closed_form_h: alpha must lie in [1, 1 + 1/(n-1))");
  }
  if (!(beta >= 0.0)) throw InputError("closed_form_h: beta must be >= 0");
  if (!(t > 0.0) || !std::isfinite(t)) throw InputError("closed_form_h: t must be positive");
  const double power = std::pow(t, n + (1.0 - n) * alpha);
  if (beta == 0.0) return power;
  return power * std::pow(std::log(std::numbers::e + 1.0 / t), beta * (n - 1));
}

double admissible_p_max(double alpha, int n) {
  if (n < 2) throw InputError("admissible_p_max: n must be >= 2");
  if (!(alpha >= 1.0)) throw InputError("admissible_p_max: alpha must be >= 1");
  const double denom = n - alpha * (n - 1);
  if (!(denom > 0.0)) throw InputError("admissible_p_max: alpha (n-1) >= n leaves no admissible p");
  return n / denom;
}

SumCondition sum_condition_sup(const orlicz::OrliczFunction& H, const PhiKernel& phi, const ScalarMap& h,
                               const DeltaMap& delta, double p, int n, std::span<const double> t_grid,
                               const SumConditionOptions& opts) {
  require_sorted_positive(t_grid, "sum_condition_sup");
  if (t_grid.size() < 3) throw InputError("sum_condition_sup: grid needs at least three nodes");
  const double decades = std::log10(t_grid.back() / t_grid.front());
  if (decades < 12.0 - 1e-9) throw InputError("sum_condition_sup: grid must cover at least 12 decades");
  if (!(p >= 1.0)) throw InputError("sum_condition_sup: p must be >= 1");

  auto g = [&](double t) {
    const double d = delta(t);
    const double ph = phi(d);
    const double arg = h(d) * t + std::pow(ph, 1.0 - n) * std::pow(d, n * (1.0 - 1.0 / p));
    const double v = H(arg) / std::pow(t, p);
    if (!std::isfinite(v) || !std::isfinite(arg)) {
      throw NumericError("sum_condition_sup: non-finite value at t = " + fmt(t));
    }
    return v;
  };

  SumCondition out;
  std::size_t arg_index = 0;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double v = g(t_grid[i]);
    if (i == 0 || v > out.value) {
      out.value = v;
      arg_index = i;
    }
  }
  out.argmax = t_grid[arg_index];
  out.lo = t_grid.front();
  out.hi = t_grid.back();
  const int per_decade = std::max(1, static_cast<int>(std::lround((t_grid.size() - 1) / decades)));

  bool at_top = arg_index == t_grid.size() - 1;
  bool at_bottom = arg_index == 0;
  while ((at_top || at_bottom) && out.extensions < opts.max_extensions) {
    const double end = at_top ? out.hi : out.lo;
    const double sign = at_top ? 1.0 : -1.0;
    double best = out.value;
    double best_t = out.argmax;
    double t_edge = end;
    bool edge_is_best = false;
    for (int i = 1; i <= per_decade; ++i) {
      t_edge = end * std::pow(10.0, sign * i / per_decade);
      const double v = g(t_edge);
      if (v > best) {
        best = v;
        best_t = t_edge;
        edge_is_best = (i == per_decade);
      } else {
        edge_is_best = false;
      }
    }
    ++out.extensions;
    (at_top ? out.hi : out.lo) = t_edge;
    const bool grows = best > out.value * (1.0 + opts.growth);
    out.value = best;
    out.argmax = best_t;
    if (!grows || !edge_is_best) {
      at_top = at_bottom = false;
      break;
    }
  }
  out.unbounded = at_top || at_bottom;
  return out;
}

}  // namespace rieszlab::kernels
