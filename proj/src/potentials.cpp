// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "rieszlab/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "rieszlab/error.hpp"
#include "rieszlab/simd/dispatch.hpp"

namespace rieszlab::potentials {
namespace {

double dist2(const Grid& g, const Point& a, const Point& b) {
  double s = 0.0;
  for (int ax = 0; ax < g.dim(); ++ax) s += (a[ax] - b[ax]) * (a[ax] - b[ax]);
  return s;
}

double kernel_value(const kernels::PhiKernel& phi, int n, double d) {
  const double ph = phi(d);
  if (!(ph > 0.0)) {
    std::ostringstream msg;
    msg << "phi vanishes at distance " << d << " > 0";
    throw NumericError(msg.str());
  }
  return n == 2 ? 1.0 / ph : std::pow(ph, 1.0 - n);
}

double self_value(const Grid& g, const kernels::PhiKernel& phi, SingularRule rule) {
  if (rule == SingularRule::ExcludeSelfCell) return 0.0;
  return kernel_value(phi, g.dim(), 0.5 * g.min_spacing());
}

// Runs work over [0, count) on up to hardware_concurrency threads.  Each item
// is computed independently, so the split does not affect results.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hw, std::max<std::size_t>(1, count / 256));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t a = w * chunk;
    const std::size_t b = std::min(count, a + chunk);
    pool.emplace_back([a, b, &fn] {
      for (std::size_t i = a; i < b; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

const char* rule_name(SingularRule rule) {
  return rule == SingularRule::ExcludeSelfCell ? "exclude-self-cell" : "cap-at-half-cell";
}

std::vector<double> default_radii(const Grid& grid) {
  const double h = grid.min_spacing();
  const double diam = grid.diameter();
  std::vector<double> radii;
  for (double r = h; r < diam; r *= 2.0) radii.push_back(r);
  radii.push_back(diam);
  return radii;
}

std::vector<double> resolve_radii(const Grid& grid, const PotentialOptions& opts) {
  if (opts.radii.empty()) return default_radii(grid);
  const auto& r = opts.radii;
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (!(r[i] > r[i - 1])) throw InputError("maximal radii must be strictly increasing");
  }
  if (!(r.front() >= grid.min_spacing() * (1.0 - 1e-12))) {
    throw InputError("smallest maximal radius must be at least the cell spacing");
  }
  if (!(r.back() >= grid.diameter() * (1.0 - 1e-12))) {
    throw InputError("largest maximal radius must reach the grid diameter");
  }
  return r;
}

SplitPotential riesz_potential_split(const GridField& f, const kernels::PhiKernel& phi, const Point& x,
                                     double delta, const PotentialOptions& opts) {
  const Grid& g = f.grid;
  const int n = g.dim();
  const auto self = g.cell_of(x);
  const double delta2 = delta * delta;
  SplitPotential out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!f.mask[i] || f.values[i] == 0.0) continue;
    const double a = std::fabs(f.values[i]);
    const double d2 = dist2(g, x, g.center(i));
    const double k = (self && *self == i) ? self_value(g, phi, opts.singular_rule)
                                          : kernel_value(phi, n, std::sqrt(d2));
    (d2 < delta2 ? out.inner : out.outer) += a * k;
  }
  out.inner *= g.cellvol();
  out.outer *= g.cellvol();
  return out;
}

double riesz_potential(const GridField& f, const kernels::PhiKernel& phi, const Point& x,
                       const PotentialOptions& opts) {
  const Grid& g = f.grid;
  const int n = g.dim();
  const auto self = g.cell_of(x);
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!f.mask[i] || f.values[i] == 0.0) continue;
    const double k = (self && *self == i) ? self_value(g, phi, opts.singular_rule)
                                          : kernel_value(phi, n, std::sqrt(dist2(g, x, g.center(i))));
    acc += std::fabs(f.values[i]) * k;
  }
  return acc * g.cellvol();
}

RieszOperator::RieszOperator(const Grid& grid, const kernels::PhiKernel& phi, SingularRule rule)
    : grid_(grid), n_(grid.dim()) {
  const int r0 = grid_.res(0);
  const int r1 = grid_.res(1);
  const int r2 = grid_.res(2);
  const std::size_t width = 2 * static_cast<std::size_t>(r0) - 1;
  table_.assign(width * static_cast<std::size_t>(r1) * static_cast<std::size_t>(r2), 0.0);
  const double h0 = grid_.spacing(0);
  const double h1 = grid_.spacing(1);
  const double h2 = n_ == 3 ? grid_.spacing(2) : 0.0;
  const double self = self_value(grid_, phi, rule);
  for (int dz = 0; dz < r2; ++dz) {
    for (int dy = 0; dy < r1; ++dy) {
      double* row = &table_[(static_cast<std::size_t>(dz) * r1 + dy) * width];
      const double yz = (dy * h1) * (dy * h1) + (dz * h2) * (dz * h2);
      for (int dx = 0; dx < r0; ++dx) {
        double v;
        if (dx == 0 && dy == 0 && dz == 0) {
          v = self;
        } else {
          v = kernel_value(phi, n_, std::sqrt((dx * h0) * (dx * h0) + yz));
        }
        row[r0 - 1 + dx] = v;
        row[r0 - 1 - dx] = v;
      }
    }
  }
}

std::vector<RieszOperator::Run> RieszOperator::runs_of(const GridField& f) const {
  if (f.grid.res() != grid_.res() || f.grid.dim() != grid_.dim()) {
    throw InputError("RieszOperator: field lives on a different grid");
  }
  const int r0 = grid_.res(0);
  std::vector<Run> runs;
  for (std::size_t row = 0; row < grid_.row_count(); ++row) {
    const std::size_t base = row * static_cast<std::size_t>(r0);
    int i = 0;
    while (i < r0) {
      while (i < r0 && (!f.mask[base + i] || f.values[base + i] == 0.0)) ++i;
      if (i == r0) break;
      const int begin = i;
      while (i < r0 && f.mask[base + i] && f.values[base + i] != 0.0) ++i;
      runs.push_back(Run{row, begin, i});
    }
  }
  return runs;
}

double RieszOperator::at_cell(const std::vector<double>& absf, const std::vector<Run>& runs,
                              std::size_t target) const {
  const int r0 = grid_.res(0);
  const int r1 = grid_.res(1);
  const std::size_t width = 2 * static_cast<std::size_t>(r0) - 1;
  const auto t = grid_.unravel(target);
  double acc = 0.0;
  for (const Run& run : runs) {
    const int j = static_cast<int>(run.row % static_cast<std::size_t>(r1));
    const int k = static_cast<int>(run.row / static_cast<std::size_t>(r1));
    const std::size_t dy = static_cast<std::size_t>(std::abs(j - t[1]));
    const std::size_t dz = static_cast<std::size_t>(std::abs(k - t[2]));
    const double* krow = &table_[(dz * r1 + dy) * width];
    const std::size_t len = static_cast<std::size_t>(run.end - run.begin);
    const double* src = &absf[run.row * static_cast<std::size_t>(r0) + static_cast<std::size_t>(run.begin)];
    const double* ker = krow + (run.begin - t[0] + r0 - 1);
    acc += simd::dot({src, len}, {ker, len});
  }
  return acc * grid_.cellvol();
}

std::vector<double> RieszOperator::apply_at(const GridField& f, std::span<const std::size_t> targets) const {
  const auto runs = runs_of(f);
  std::vector<double> absf(f.values.size());
  for (std::size_t i = 0; i < absf.size(); ++i) absf[i] = std::fabs(f.values[i]);
  std::vector<double> out(targets.size(), 0.0);
  parallel_for(targets.size(), [&](std::size_t i) { out[i] = at_cell(absf, runs, targets[i]); });
  return out;
}

GridField RieszOperator::apply(const GridField& f) const {
  std::vector<std::size_t> targets;
  for (std::size_t i = 0; i < f.mask.size(); ++i) {
    if (f.mask[i]) targets.push_back(i);
  }
  const auto vals = apply_at(f, targets);
  std::vector<double> out(f.values.size(), 0.0);
  for (std::size_t i = 0; i < targets.size(); ++i) out[targets[i]] = vals[i];
  return GridField(f.grid, f.mask, std::move(out));
}

GridField riesz_potential(const GridField& f, const kernels::PhiKernel& phi, const PotentialOptions& opts) {
  return RieszOperator(f.grid, phi, opts.singular_rule).apply(f);
}

MaximalOperator::MaximalOperator(const GridField& f, const PotentialOptions& opts)
    : grid_(f.grid), mask_(f.mask), radii_(resolve_radii(f.grid, opts)) {
  const int r0 = grid_.res(0);
  c_ref_ = std::fabs(f.values[0]);
  prefix_.assign(grid_.row_count() * static_cast<std::size_t>(r0 + 1), 0.0);
  for (std::size_t row = 0; row < grid_.row_count(); ++row) {
    double* p = &prefix_[row * static_cast<std::size_t>(r0 + 1)];
    const double* v = &f.values[row * static_cast<std::size_t>(r0)];
    for (int i = 0; i < r0; ++i) p[i + 1] = p[i] + (std::fabs(v[i]) - c_ref_);
  }
}

double MaximalOperator::ball_average(const Point& x, double r) const {
  const int r0 = grid_.res(0);
  const int r1 = grid_.res(1);
  const int r2 = grid_.res(2);
  const double h0 = grid_.spacing(0);
  // Centers within rounding of the sphere count as on it, hence outside the
  // open ball; lattice-aligned queries otherwise pick up stray neighbors.
  const double r_sq = r * r * (1.0 - 1e-12);
  const auto& lo = grid_.bbox().lo;

  auto axis_range = [&](int axis, double c, double half, int res) {
    const double h = grid_.spacing(axis);
    int a = static_cast<int>(std::ceil((c - half - lo[axis]) / h - 0.5));
    int b = static_cast<int>(std::floor((c + half - lo[axis]) / h - 0.5));
    return std::pair<int, int>{std::max(a - 1, 0), std::min(b + 1, res - 1)};
  };

  double total = 0.0;
  std::size_t count = 0;
  const auto [klo, khi] = grid_.dim() == 3 ? axis_range(2, x[2], r, r2) : std::pair<int, int>{0, 0};
  const auto [jlo, jhi] = axis_range(1, x[1], r, r1);
  for (int k = klo; k <= khi; ++k) {
    const double dz = grid_.dim() == 3 ? grid_.center_coord(2, k) - x[2] : 0.0;
    for (int j = jlo; j <= jhi; ++j) {
      const double dy = grid_.center_coord(1, j) - x[1];
      const double s = dy * dy + dz * dz;
      if (!(s < r_sq)) continue;
      const double half = std::sqrt(r_sq - s);
      auto inside = [&](int i) {
        const double dx = grid_.center_coord(0, i) - x[0];
        return dx * dx + s < r_sq;
      };
      int a = static_cast<int>(std::ceil((x[0] - half - lo[0]) / h0 - 0.5));
      int b = static_cast<int>(std::floor((x[0] + half - lo[0]) / h0 - 0.5));
      a = std::clamp(a, 0, r0 - 1);
      b = std::clamp(b, 0, r0 - 1);
      while (a > 0 && inside(a - 1)) --a;
      while (a <= b && !inside(a)) ++a;
      while (b + 1 < r0 && inside(b + 1)) ++b;
      while (b >= a && !inside(b)) --b;
      if (b < a) continue;
      const double* p = &prefix_[(static_cast<std::size_t>(k) * r1 + j) * static_cast<std::size_t>(r0 + 1)];
      total += p[b + 1] - p[a];
      count += static_cast<std::size_t>(b - a + 1);
    }
  }
  if (count == 0) return -1.0;
  return c_ref_ + total / static_cast<double>(count);
}

double MaximalOperator::at(const Point& x) const {
  double best = 0.0;
  for (double r : radii_) best = std::max(best, ball_average(x, r));
  return best;
}

GridField MaximalOperator::field() const {
  std::vector<double> out(grid_.size(), 0.0);
  std::vector<std::size_t> targets;
  for (std::size_t i = 0; i < mask_.size(); ++i) {
    if (mask_[i]) targets.push_back(i);
  }
  parallel_for(targets.size(), [&](std::size_t t) { out[targets[t]] = at(grid_.center(targets[t])); });
  return GridField(grid_, mask_, std::move(out));
}

double maximal_function(const GridField& f, const Point& x, const PotentialOptions& opts) {
  return MaximalOperator(f, opts).at(x);
}

GridField maximal_function(const GridField& f, const PotentialOptions& opts) {
  return MaximalOperator(f, opts).field();
}

BallRatioCheck annulus_bound_check(const GridField& f, const kernels::PhiKernel& phi, const ScalarMap& h, double delta,
                               std::span<const Point> points, const PotentialOptions& opts) {
  if (!(delta > 0.0)) throw InputError("annulus_bound_check: delta must be positive");
  const double hd = h(delta);
  if (!(hd > 0.0) || !std::isfinite(hd)) throw NumericError("annulus_bound_check: h(delta) must be positive");
  const MaximalOperator M(f, opts);
  BallRatioCheck out;
  for (const Point& x : points) {
    const double m = M.at(x);
    if (!(m > 0.0)) continue;
    const double inner = riesz_potential_split(f, phi, x, delta, opts).inner;
    const double ratio = inner / (hd * m);
    if (out.admissible == 0 || ratio > out.constant) {
      out.constant = ratio;
      out.argmax = x;
    }
    ++out.admissible;
  }
  out.vacuous = out.admissible == 0;
  return out;
}

BallRatioCheck tail_bound_check(const GridField& f, const kernels::PhiKernel& phi, double p, double delta,
                            std::span<const Point> points, const PotentialOptions& opts) {
  if (!(delta > 0.0)) throw InputError("tail_bound_check: delta must be positive");
  if (!(p >= 1.0)) throw InputError("tail_bound_check: p must be >= 1");
  if (lp_norm(f, p) > 1.0 + 1e-9) throw InputError("tail_bound_check: the field must satisfy ||f||_p <= 1");
  const int n = f.grid.dim();
  const double denom = std::pow(phi(delta), 1.0 - n) * std::pow(delta, n * (1.0 - 1.0 / p));
  BallRatioCheck out;
  for (const Point& x : points) {
    const double ratio = riesz_potential_split(f, phi, x, delta, opts).outer / denom;
    if (out.admissible == 0 || ratio > out.constant) {
      out.constant = ratio;
      out.argmax = x;
    }
    ++out.admissible;
  }
  out.vacuous = out.admissible == 0 || f.max_abs() == 0.0;
  return out;
}

}  // namespace rieszlab::potentials
