// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "rieszlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "rieszlab/error.hpp"
#include "rieszlab/orlicz.hpp"

namespace rieszlab {

Grid::Grid(int dim, const Box& bbox, const std::array<int, 3>& res) : dim_(dim), bbox_(bbox), res_(res) {
  if (dim != 2 && dim != 3) throw InputError("grid dimension must be 2 or 3");
  if (dim == 2) {
    res_[2] = 1;
    bbox_.lo[2] = 0.0;
    bbox_.hi[2] = 0.0;
  }
  cellvol_ = 1.0;
  size_ = 1;
  for (int a = 0; a < 3; ++a) {
    if (a >= dim) {
      spacing_[a] = 1.0;
      continue;
    }
    if (res_[a] < 1) throw InputError("grid resolution must be positive");
    if (!(bbox_.hi[a] > bbox_.lo[a]) || !std::isfinite(bbox_.hi[a] - bbox_.lo[a])) {
      throw InputError("grid bounding box must have positive finite extent");
    }
    spacing_[a] = (bbox_.hi[a] - bbox_.lo[a]) / res_[a];
    cellvol_ *= spacing_[a];
    size_ *= static_cast<std::size_t>(res_[a]);
  }
}

double Grid::min_spacing() const {
  double h = spacing_[0];
  for (int a = 1; a < dim_; ++a) h = std::min(h, spacing_[a]);
  return h;
}

double Grid::diameter() const {
  double s = 0.0;
  for (int a = 0; a < dim_; ++a) {
    const double e = bbox_.hi[a] - bbox_.lo[a];
    s += e * e;
  }
  return std::sqrt(s);
}

std::array<int, 3> Grid::unravel(std::size_t idx) const {
  const auto r0 = static_cast<std::size_t>(res_[0]);
  const auto r1 = static_cast<std::size_t>(res_[1]);
  return {static_cast<int>(idx % r0), static_cast<int>((idx / r0) % r1), static_cast<int>(idx / (r0 * r1))};
}

Point Grid::center(std::size_t idx) const {
  const auto ijk = unravel(idx);
  Point p{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) p[a] = center_coord(a, ijk[a]);
  return p;
}

std::optional<std::size_t> Grid::cell_of(const Point& x) const {
  std::array<int, 3> ijk{0, 0, 0};
  for (int a = 0; a < dim_; ++a) {
    if (!(x[a] >= bbox_.lo[a] && x[a] <= bbox_.hi[a])) return std::nullopt;
    const double s = (x[a] - bbox_.lo[a]) / spacing_[a];
    int i = static_cast<int>(std::ceil(s)) - 1;
    ijk[a] = std::clamp(i, 0, res_[a] - 1);
  }
  return index(ijk[0], ijk[1], ijk[2]);
}

bool DomainGeometry::inside(const Point& p) const {
  for (int a = 0; a < dim; ++a) {
    if (p[a] < bbox.lo[a] || p[a] > bbox.hi[a]) return false;
  }
  return predicate && predicate(p);
}

Discretization discretize(const DomainGeometry& dom, const std::array<int, 3>& res) {
  for (int a = 0; a < dom.dim; ++a) {
    if (res[a] < 8) throw InputError("discretize: resolution must be >= 8 on every axis");
  }
  Grid grid(dom.dim, dom.bbox, res);
  std::vector<std::uint8_t> mask(grid.size(), 0);
  std::size_t count = 0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (dom.inside(grid.center(idx))) {
      mask[idx] = 1;
      ++count;
    }
  }
  if (count == 0) throw InputError("discretize: no cell center lies inside domain '" + dom.label + "'");
  return Discretization{std::move(grid), std::move(mask), count};
}

Discretization discretize(const DomainGeometry& dom, int res) { return discretize(dom, {res, res, res}); }

GridField::GridField(Grid g, std::vector<std::uint8_t> m, std::vector<double> v)
    : grid(std::move(g)), mask(std::move(m)), values(std::move(v)) {
  if (mask.size() != grid.size() || values.size() != grid.size()) {
    throw InputError("GridField: mask and values must match the grid size");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!mask[i]) {
      values[i] = 0.0;
    } else if (!std::isfinite(values[i])) {
      throw InputError("GridField: non-finite value on a masked cell");
    }
  }
}

GridField GridField::zeros(const Discretization& d) {
  return GridField(d.grid, d.mask, std::vector<double>(d.grid.size(), 0.0));
}

GridField GridField::sample(const Discretization& d, const std::function<double(const Point&)>& fn) {
  std::vector<double> v(d.grid.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (d.mask[i]) v[i] = fn(d.grid.center(i));
  }
  return GridField(d.grid, d.mask, std::move(v));
}

std::size_t GridField::masked_count() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

double GridField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::fabs(v));
  return m;
}

GridField GridField::scaled(double c) const {
  GridField out = *this;
  for (double& v : out.values) v *= c;
  return out;
}

GridField GridField::abs() const {
  GridField out = *this;
  for (double& v : out.values) v = std::fabs(v);
  return out;
}

GridField gradient_magnitude(const GridField& u) {
  const Grid& g = u.grid;
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!u.mask[idx]) continue;
    const auto ijk = g.unravel(idx);
    double sq = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      auto at = [&](int offset) -> const double* {
        auto c = ijk;
        c[a] += offset;
        if (c[a] < 0 || c[a] >= g.res(a)) return nullptr;
        const std::size_t j = g.index(c[0], c[1], c[2]);
        return u.mask[j] ? &u.values[j] : nullptr;
      };
      const double h = g.spacing(a);
      const double u0 = u.values[idx];
      const double* up = at(1);
      const double* um = at(-1);
      double d = 0.0;
      if (up && um) {
        d = (*up - *um) / (2.0 * h);
      } else if (up) {
        const double* up2 = at(2);
        d = up2 ? (-3.0 * u0 + 4.0 * *up - *up2) / (2.0 * h) : (*up - u0) / h;
      } else if (um) {
        const double* um2 = at(-2);
        d = um2 ? (3.0 * u0 - 4.0 * *um + *um2) / (2.0 * h) : (u0 - *um) / h;
      }
      sq += d * d;
    }
    out[idx] = std::sqrt(sq);
  }
  return GridField(g, u.mask, std::move(out));
}

double lp_norm(const GridField& u, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw InputError("lp_norm: p must be positive and finite");
  double acc = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    if (u.mask[i]) acc += std::pow(std::fabs(u.values[i]), p);
  }
  return std::pow(acc * u.grid.cellvol(), 1.0 / p);
}

double llogl_norm(const GridField& u) {
  return orlicz::luxemburg_norm(u, orlicz::OrliczFunction::llogl()).value;
}

double domain_average(const GridField& u) {
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    if (u.mask[i]) {
      acc += u.values[i];
      ++count;
    }
  }
  if (count == 0) throw InputError("domain_average: empty mask");
  return acc / static_cast<double>(count);
}

double ball_average(const GridField& u, const Point& x, double r) {
  const Grid& g = u.grid;
  const double r_sq = r * r * (1.0 - 1e-12);  // open ball, robust to rounding on the sphere
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!u.mask[i]) continue;
    const Point c = g.center(i);
    double d2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) d2 += (c[a] - x[a]) * (c[a] - x[a]);
    if (d2 < r_sq) {
      acc += u.values[i];
      ++count;
    }
  }
  if (count == 0) throw InputError("ball_average: the ball contains no masked cell");
  return acc / static_cast<double>(count);
}

GridField subtract_constant(const GridField& u, double c) {
  GridField out = u;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (out.mask[i]) out.values[i] -= c;
  }
  return out;
}

void write_field_csv(std::ostream& out, const GridField& u, const std::string& value_name) {
  const Grid& g = u.grid;
  out << "index";
  for (int a = 0; a < g.dim(); ++a) out << ",x" << (a + 1);
  out << ',' << value_name << '\n';
  char buf[32];
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!u.mask[i]) continue;
    out << i;
    const Point c = g.center(i);
    for (int a = 0; a < g.dim(); ++a) {
      std::snprintf(buf, sizeof buf, "%.17g", c[a]);
      out << ',' << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", u.values[i]);
    out << ',' << buf << '\n';
  }
}

}  // namespace rieszlab
