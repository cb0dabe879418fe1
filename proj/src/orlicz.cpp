// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "rieszlab/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rieszlab/error.hpp"

namespace rieszlab::orlicz {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double eval_family(const Family& family, double t) {
  return std::visit(
      Overloaded{
          [t](const Power& f) { return std::pow(t, f.p); },
          [t](const LLogL&) { return t * std::log(std::numbers::e + t); },
          [t](const PowerOverLog& f) {
            if (t == 0.0) return 0.0;
            return std::pow(t / std::pow(std::log(f.m + t), f.gamma), f.q);
          },
          [t](const ExpMinusOne&) { return std::expm1(t); },
          [t](const Custom& f) { return f.fn(t); },
      },
      family);
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

}  // namespace

OrliczFunction::OrliczFunction(Family family, double coefficient)
    : family_(std::move(family)), coefficient_(coefficient) {
  if (!(coefficient_ > 0.0) || !std::isfinite(coefficient_)) {
    throw InputError("Orlicz coefficient must be positive and finite");
  }
  if (const auto* f = std::get_if<Power>(&family_); f && !(f->p > 0.0)) {
    throw InputError("Power exponent must be positive");
  }
  if (const auto* f = std::get_if<PowerOverLog>(&family_)) {
    if (!(f->q > 0.0)) throw InputError("PowerOverLog requires q > 0");
    if (!(f->m >= std::numbers::e)) throw InputError("PowerOverLog requires m >= e");
    if (!std::isfinite(f->gamma)) throw InputError("PowerOverLog requires finite gamma");
  }
  if (const auto* f = std::get_if<Custom>(&family_); f && !f->fn) {
    throw InputError("Custom Orlicz function needs a callable");
  }
}

OrliczFunction OrliczFunction::power(double p, double coefficient) {
  return OrliczFunction(Power{p}, coefficient);
}
OrliczFunction OrliczFunction::llogl() { return OrliczFunction(LLogL{}); }
OrliczFunction OrliczFunction::power_over_log(double q, double gamma, double m) {
  return OrliczFunction(PowerOverLog{q, gamma, m});
}
OrliczFunction OrliczFunction::exp_minus_one() { return OrliczFunction(ExpMinusOne{}); }
OrliczFunction OrliczFunction::custom(ScalarMap fn, std::string name) {
  return OrliczFunction(Custom{std::move(fn), std::move(name)});
}

double OrliczFunction::operator()(double t) const {
  if (!std::isfinite(t) || t < 0.0) throw InputError("H: argument must be finite and >= 0, got " + fmt(t));
  if (t == 0.0) return 0.0;
  return coefficient_ * eval_family(family_, t);
}

double eval_H(const OrliczFunction& H, double t) { return H(t); }

std::string OrliczFunction::describe() const {
  std::string base = std::visit(
      Overloaded{
          [](const Power& f) { return "t^" + fmt(f.p); },
          [](const LLogL&) { return std::string("t*log(e+t)"); },
          [](const PowerOverLog& f) {
            return "(t/log^" + fmt(f.gamma) + "(" + fmt(f.m) + "+t))^" + fmt(f.q);
          },
          [](const ExpMinusOne&) { return std::string("exp(t)-1"); },
          [](const Custom& f) { return f.name; },
      },
      family_);
  if (coefficient_ != 1.0) base = fmt(coefficient_) + "*" + base;
  return base;
}

OrliczFunction OrliczFunction::scaled(double c) const {
  OrliczFunction out(family_, coefficient_ * c);
  out.delta2_constant_ = delta2_constant_;
  return out;
}

OrliczFunction OrliczFunction::with_delta2_estimate(std::span<const double> grid) const {
  OrliczFunction out = *this;
  const SupEstimate est = delta2_estimate(*this, grid);
  if (est.unbounded) {
    out.delta2_constant_.reset();
  } else {
    out.delta2_constant_ = est.value;
  }
  return out;
}

bool NFunctionReport::all_pass() const {
  return std::all_of(properties.begin(), properties.end(), [](const PropertyCheck& c) { return c.pass; });
}

NFunctionReport n_function_check(const OrliczFunction& H, std::span<const double> grid) {
  if (grid.size() < 3 || grid.front() > 1e-8 * (1 + 1e-12) || grid.back() < 1e8 * (1 - 1e-12)) {
    throw InputError("n_function_check: grid must cover [1e-8, 1e8]");
  }
  NFunctionReport report;
  auto fail = [&](int property, double witness, std::string detail) {
    auto& c = report.properties[static_cast<std::size_t>(property - 1)];
    if (!c.pass) return;
    c.pass = false;
    c.witness = witness;
    c.detail = std::move(detail);
  };

  // Evaluation range: stop at the first overflow.
  std::vector<double> ts;
  std::vector<double> hs;
  for (double t : grid) {
    if (!(t > 0.0)) throw InputError("n_function_check: grid must be positive");
    const double v = H(t);
    if (std::isnan(v)) {
      fail(1, t, "H is not a number");
      continue;
    }
    if (std::isinf(v)) break;
    ts.push_back(t);
    hs.push_back(v);
  }
  if (ts.size() < 3) {
    fail(1, grid.front(), "H overflows on nearly the whole grid");
    return report;
  }
  report.range_max = ts.back();
  if (ts.back() < grid.back()) {
    report.properties[0].detail = "evaluated up to t = " + std::to_string(ts.back()) + " (overflow beyond)";
  }

  if (H(0.0) != 0.0) fail(2, 0.0, "H(0) != 0");
  if (!(hs.front() > 0.0)) fail(2, ts.front(), "H(t) <= H(0) at the first node");

  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double a = ts[i];
    const double b = ts[i + 1];
    const double ha = hs[i];
    const double hb = hs[i + 1];
    if (!(hb > ha)) fail(2, b, "H not strictly increasing");
    const double mid = 0.5 * (a + b);
    const double hm = H(mid);
    if (!std::isfinite(hm) || hm < std::min(ha, hb) || hm > std::max(ha, hb)) {
      fail(1, mid, "midpoint value not between neighbouring values");
    }
    const double chord = 0.5 * (ha + hb);
    if (hm > chord * (1.0 + 1e-12) + 1e-300) fail(3, mid, "midpoint above chord");
    if (!(hb / b > ha / a)) fail(5, b, "H(t)/t not strictly increasing");
  }

  auto slope_between = [&](std::size_t i, std::size_t j) {
    const double ri = hs[i] / ts[i];
    const double rj = hs[j] / ts[j];
    return (std::log(rj) - std::log(ri)) / (std::log(ts[j]) - std::log(ts[i]));
  };
  std::size_t low_end = 0;
  while (low_end + 1 < ts.size() && ts[low_end] < 10.0 * ts.front() * (1 - 1e-12)) ++low_end;
  std::size_t high_start = ts.size() - 1;
  while (high_start > 0 && ts[high_start] > ts.back() / 10.0 * (1 + 1e-12)) --high_start;
  report.low_slope = slope_between(0, low_end);
  report.high_slope = slope_between(high_start, ts.size() - 1);
  constexpr double kTrend = 1e-3;
  if (!(report.low_slope > kTrend)) fail(4, ts.front(), "H(t)/t does not decrease towards 0 at the low end");
  if (!(report.high_slope > kTrend)) fail(4, ts.back(), "H(t)/t does not grow at the high end");
  return report;
}

SupEstimate delta2_estimate(const OrliczFunction& H, std::span<const double> grid) {
  if (const auto* f = std::get_if<Power>(&H.family())) {
    for (double t : grid) {
      if (!(t > 0.0)) throw InputError("delta2_estimate: grid must be positive");
    }
    return SupEstimate{std::exp2(f->p), grid.empty() ? 0.0 : grid.front(), false};
  }
  return doubling_sup([&H](double t) { return H(t); }, grid);
}

TailSum h_tail_summable(const OrliczFunction& H, int J, double threshold) {
  if (J < 32) throw InputError("h_tail_summable: J must be >= 32");
  TailSum out;
  for (int j = 1; j <= J; ++j) {
    const double term = H(std::ldexp(1.0, -j));
    out.partial += term;
    if (j >= J / 2) out.last_block += term;
  }
  out.converged = std::isfinite(out.partial) && out.last_block < threshold * out.partial;
  return out;
}

double modular(std::span<const double> values, double cellvol, const OrliczFunction& H, double lambda) {
  double acc = 0.0;
  for (double v : values) {
    if (v != 0.0) acc += H(std::fabs(v) / lambda);
  }
  return acc * cellvol;
}

NormResult luxemburg_norm(std::span<const double> values, double cellvol, const OrliczFunction& H,
                          const LuxemburgOptions& opts) {
  if (!(cellvol > 0.0)) throw InputError("luxemburg_norm: cell volume must be positive");
  double peak = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw InputError("luxemburg_norm: field has non-finite values");
    peak = std::max(peak, std::fabs(v));
  }
  NormResult out;
  if (peak == 0.0) {
    out.converged = true;
    return out;
  }

  auto over = [&](double lambda) { return modular(values, cellvol, H, lambda) > 1.0; };
  double lo = 1e-30;
  double hi = 1.0;
  if (over(hi)) {
    int steps = 0;
    while (over(hi)) {
      lo = hi;
      hi *= 2.0;
      if (++steps > opts.max_doublings || !std::isfinite(hi)) {
        throw NumericError("luxemburg_norm: no bracket within 200 doublings (field too large)");
      }
    }
  } else {
    int steps = 0;
    lo = hi;
    while (!over(lo)) {
      hi = lo;
      lo *= 0.5;
      if (++steps > opts.max_doublings || lo == 0.0) {
        throw NumericError("luxemburg_norm: no bracket within 200 halvings (field too small)");
      }
    }
  }

  constexpr double kFloor = 1e-300;
  int it = 0;
  while (it < opts.max_iterations && (hi - lo) / std::max(hi, kFloor) > opts.rel_tol) {
    const double mid = 0.5 * (lo + hi);
    if (over(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++it;
  }
  out.value = hi;
  out.iterations = it;
  out.lo = lo;
  out.hi = hi;
  out.converged = (hi - lo) / std::max(hi, kFloor) <= opts.rel_tol;
  return out;
}

NormResult luxemburg_norm(const GridField& u, const OrliczFunction& H, const LuxemburgOptions& opts) {
  return luxemburg_norm(u.values, u.grid.cellvol(), H, opts);
}

}  // namespace rieszlab::orlicz
