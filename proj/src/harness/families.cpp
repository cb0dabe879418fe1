// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "rieszlab/harness/families.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "rieszlab/numeric.hpp"

namespace rieszlab::harness {
namespace {

double dist2(int dim, const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

}  // namespace

ReferenceBall placement_ball(const DomainGeometry& dom) {
  if (dom.reference_ball) return *dom.reference_ball;
  ReferenceBall b;
  double r = 0.0;
  for (int a = 0; a < dom.dim; ++a) {
    b.center[a] = 0.5 * (dom.bbox.lo[a] + dom.bbox.hi[a]);
    const double half = 0.5 * (dom.bbox.hi[a] - dom.bbox.lo[a]);
    r = a == 0 ? half : std::min(r, half);
  }
  b.radius = r;
  return b;
}

std::vector<FieldSpec> density_family(const Config& c, const DomainGeometry& dom) {
  const ReferenceBall ball = placement_ball(dom);
  const Point x0 = ball.center;
  const double R = ball.radius;
  const int dim = dom.dim;
  std::vector<FieldSpec> out;
  for (const auto& name : c.fields.families) {
    if (name == "indicator") {
      for (double frac : {0.25, 0.5}) {
        const double rr = frac * R;
        out.push_back({"indicator-ball-" + std::to_string(static_cast<int>(frac * 100)),
                       [=](const Point& x) { return dist2(dim, x, x0) < rr * rr ? 1.0 : 0.0; }});
      }
      Point cc = x0;
      cc[0] += 0.25 * R;
      const double half = R / 3.0;
      out.push_back({"indicator-cube", [=](const Point& x) {
                       for (int a = 0; a < dim; ++a) {
                         if (std::fabs(x[a] - cc[a]) >= half) return 0.0;
                       }
                       return 1.0;
                     }});
    } else if (name == "gaussian") {
      const double s1 = R / 6.0;
      out.push_back({"gaussian-center", [=](const Point& x) { return std::exp(-dist2(dim, x, x0) / (2 * s1 * s1)); }});
      Point off = x0;
      off[0] += R / 3.0;
      const double s2 = R / 3.0;
      out.push_back({"gaussian-offset", [=](const Point& x) { return std::exp(-dist2(dim, x, off) / (2 * s2 * s2)); }});
    } else if (name == "random") {
      // Seeded values on a fixed 8^n lattice over the bounding box,
      // piecewise constant, then one smoothing pass on the grid.
      constexpr int L = 8;
      const Box box = dom.bbox;
      for (int s = 0; s < c.fields.random_count; ++s) {
        const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(s);
        Rng rng(seed);
        const int cells = dim == 3 ? L * L * L : L * L;
        auto values = std::make_shared<std::vector<double>>(cells);
        for (double& v : *values) v = rng.uniform();
        out.push_back({"random-" + std::to_string(seed),
                       [=](const Point& x) {
                         int idx = 0;
                         int stride = 1;
                         for (int a = 0; a < dim; ++a) {
                           const double t = (x[a] - box.lo[a]) / (box.hi[a] - box.lo[a]);
                           const int i = std::clamp(static_cast<int>(std::floor(t * L)), 0, L - 1);
                           idx += i * stride;
                           stride *= L;
                         }
                         return (*values)[static_cast<std::size_t>(idx)];
                       },
                       true});
      }
    } else if (name == "trig") {
      const Box box = dom.bbox;
      for (int k : {1, 2}) {
        out.push_back({"trig-" + std::to_string(k), [=](const Point& x) {
                         double prod = 1.0;
                         for (int a = 0; a < dim; ++a) {
                           const double t = (x[a] - box.lo[a]) / (box.hi[a] - box.lo[a]);
                           prod *= std::cos(std::numbers::pi * k * t);
                         }
                         return 1.0 + 0.5 * prod;
                       }});
      }
    } else if (name == "unit-ball") {
      out.push_back({"unit-ball", [=](const Point& x) { return dist2(dim, x, Point{}) < 1.0 ? 1.0 : 0.0; }});
    } else if (name == "constant") {
      const double v = c.fields.value;
      out.push_back({"constant", [v](const Point&) { return v; }});
    }
  }
  return out;
}

std::vector<FieldSpec> smooth_family(const DomainGeometry& dom) {
  const int dim = dom.dim;
  const Box box = dom.bbox;
  const ReferenceBall ball = placement_ball(dom);
  auto unit = [box](const Point& x, int a) { return (x[a] - box.lo[a]) / (box.hi[a] - box.lo[a]); };
  std::vector<FieldSpec> out;
  out.push_back({"linear-x1", [](const Point& x) { return x[0]; }});
  out.push_back({"quadratic", [=](const Point& x) { return dist2(dim, x, ball.center); }});
  out.push_back({"trig-c11", [=](const Point& x) {
                   double prod = 1.0;
                   for (int a = 0; a < dim; ++a) prod *= std::cos(std::numbers::pi * unit(x, a));
                   return prod;
                 }});
  out.push_back({"trig-s21", [=](const Point& x) {
                   double v = std::sin(2.0 * std::numbers::pi * unit(x, 0));
                   for (int a = 1; a < dim; ++a) v *= std::cos(std::numbers::pi * unit(x, a));
                   return v;
                 }});
  return out;
}

GridField box_smooth(const GridField& f) {
  const Grid& g = f.grid;
  std::vector<double> out(g.size(), 0.0);
  const int kz = g.dim() == 3 ? 1 : 0;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!f.mask[idx]) continue;
    const auto ijk = g.unravel(idx);
    double acc = 0.0;
    int count = 0;
    for (int dz = -kz; dz <= kz; ++dz) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int i = ijk[0] + dx;
          const int j = ijk[1] + dy;
          const int k = ijk[2] + dz;
          if (i < 0 || j < 0 || k < 0 || i >= g.res(0) || j >= g.res(1) || k >= g.res(2)) continue;
          const std::size_t n = g.index(i, j, k);
          if (!f.mask[n]) continue;
          acc += f.values[n];
          ++count;
        }
      }
    }
    out[idx] = acc / count;
  }
  return GridField(g, f.mask, std::move(out));
}

GridField sample_field(const Discretization& d, const FieldSpec& spec, double scale, double p, const Point& center) {
  const int dim = d.grid.dim();
  GridField f = scale == 1.0 ? GridField::sample(d, spec.fn)
                             : GridField::sample(d, [&](const Point& x) {
                                 Point y = x;
                                 for (int a = 0; a < dim; ++a) y[a] = center[a] + scale * (x[a] - center[a]);
                                 return std::pow(scale, dim / p) * spec.fn(y);
                               });
  if (spec.smoothing_pass) f = box_smooth(f);
  return f;
}

}  // namespace rieszlab::harness
