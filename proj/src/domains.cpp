// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "rieszlab/domains.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rieszlab/error.hpp"

namespace rieszlab::domains {

DomainGeometry ball_domain(int dim, const Point& center, double radius) {
  if (dim != 2 && dim != 3) throw InputError("ball: dimension must be 2 or 3");
  if (!(radius > 0.0)) throw InputError("ball: radius must be positive");
  DomainGeometry d;
  d.label = "ball";
  d.dim = dim;
  for (int a = 0; a < dim; ++a) {
    d.bbox.lo[a] = center[a] - radius;
    d.bbox.hi[a] = center[a] + radius;
  }
  d.predicate = [dim, center, radius](const Point& p) {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += (p[a] - center[a]) * (p[a] - center[a]);
    return s < radius * radius;
  };
  d.reference_ball = ReferenceBall{center, radius};
  return d;
}

DomainGeometry box_domain(int dim, const Box& box) {
  if (dim != 2 && dim != 3) throw InputError("box: dimension must be 2 or 3");
  DomainGeometry d;
  d.label = "box";
  d.dim = dim;
  d.bbox = box;
  double inradius = 0.0;
  Point c{};
  for (int a = 0; a < dim; ++a) {
    if (!(box.hi[a] > box.lo[a])) throw InputError("box: empty extent");
    c[a] = 0.5 * (box.lo[a] + box.hi[a]);
    const double half = 0.5 * (box.hi[a] - box.lo[a]);
    inradius = a == 0 ? half : std::min(inradius, half);
  }
  d.predicate = [dim, box](const Point& p) {
    for (int a = 0; a < dim; ++a) {
      if (!(p[a] > box.lo[a] && p[a] < box.hi[a])) return false;
    }
    return true;
  };
  d.reference_ball = ReferenceBall{c, inradius};
  return d;
}

DomainGeometry unit_cube(int dim) {
  Box b;
  for (int a = 0; a < dim; ++a) b.hi[a] = 1.0;
  auto d = box_domain(dim, b);
  d.label = "unit-cube";
  return d;
}

double RadiusSequence::at(int k) const { return r0 * std::pow(ratio, k); }

namespace {

void validate(const MushroomSpec& spec) {
  if (spec.dim != 2 && spec.dim != 3) throw InputError("mushroom: dimension must be 2 or 3");
  if (!(spec.radii.r0 > 0.0)) throw InputError("mushroom: r0 must be positive");
  if (!(spec.radii.ratio > 0.0 && spec.radii.ratio < 1.0)) {
    throw InputError("mushroom: ratio must lie in (0, 1) so that r_k decreases to 0");
  }
  if (spec.count < 1) throw InputError("mushroom: count must be >= 1");
  if (spec.first_index < 0) throw InputError("mushroom: first_index must be >= 0");
  for (int k = spec.first_index; k <= spec.last_index(); ++k) {
    const double r = spec.r(k);
    if (spec.phi(r) > r) {
      std::ostringstream msg;
      msg << "mushroom: phi(r_" << k << ") = " << spec.phi(r) << " exceeds r_" << k << " = " << r;
      throw InputError(msg.str());
    }
  }
}

}  // namespace

std::vector<MushroomSlot> mushroom_layout(const MushroomSpec& spec) {
  validate(spec);
  const double gap = 0.5 * spec.r(spec.first_index);
  std::vector<MushroomSlot> slots;
  double cursor = 0.0;
  for (int k = spec.first_index; k <= spec.last_index(); ++k) {
    const double r = spec.r(k);
    if (cursor + 2.0 * r > 1.0 + 1e-12) {
      std::ostringstream msg;
      msg << "mushroom: " << spec.count << " mushrooms do not fit on the face x2 = 1; at most "
          << slots.size() << " fit starting from index " << spec.first_index;
      throw InputError(msg.str());
    }
    slots.push_back(MushroomSlot{k, cursor, r, spec.phi(r)});
    cursor += 2.0 * r + gap;
  }
  return slots;
}

DomainGeometry mushroom_build(const MushroomSpec& spec) {
  const auto slots = mushroom_layout(spec);
  const int dim = spec.dim;
  const double r_first = slots.front().r;
  DomainGeometry d;
  d.label = "mushroom";
  d.dim = dim;
  d.bbox.lo = {0.0, -3.0 * r_first, 0.0};
  d.bbox.hi = {1.0, 1.0 + 3.0 * r_first, dim == 3 ? 1.0 : 0.0};
  d.predicate = [slots, dim](const Point& p) {
    const double y = 0.5 + std::fabs(p[1] - 0.5);  // fold onto the upper half
    auto in3 = [&](double half) { return dim == 2 || std::fabs(p[2] - 0.5) < half; };
    const bool in_q0 = p[0] > 0.0 && p[0] < 1.0 && y < 1.0 && (dim == 2 || (p[2] > 0.0 && p[2] < 1.0));
    if (in_q0) return true;
    for (const auto& s : slots) {
      const double top = 1.0 + 3.0 * s.r;
      if (p[0] > s.cap_lo && p[0] < s.cap_lo + 2.0 * s.r && y > 1.0 + s.r && y < top && in3(s.r)) return true;
      // Neck box reaching into Q0 and the cap so the interfaces are interior.
      if (std::fabs(p[0] - s.center()) < 0.5 * s.width && y < 1.0 + 2.0 * s.r && in3(0.5 * s.width)) return true;
    }
    return false;
  };
  d.reference_ball = ReferenceBall{{0.5, 0.5, dim == 3 ? 0.5 : 0.0}, 0.5};
  return d;
}

Discretization mushroom_discretize(const MushroomSpec& spec, int res, int align_k) {
  const auto slots = mushroom_layout(spec);
  auto it = std::find_if(slots.begin(), slots.end(), [&](const MushroomSlot& s) { return s.index == align_k; });
  if (it == slots.end()) throw InputError("mushroom_discretize: mushroom to align is not realized");
  if (res < 8) throw InputError("mushroom_discretize: resolution must be >= 8");
  DomainGeometry dom = mushroom_build(spec);

  // Cell size phi/N with N = floor(phi * res) >= 1, offset so that both walls
  // center +- phi/2 are faces.
  auto aligned_axis = [&](double wall_lo, int& cells, double& lo) {
    const int N = std::max(1, static_cast<int>(std::floor(it->width * res)));
    const double h = it->width / N;
    lo = wall_lo - h * std::ceil(wall_lo / h - 1e-12);
    cells = static_cast<int>(std::ceil((1.0 - lo) / h - 1e-12));
    return h;
  };
  std::array<int, 3> cells{res, res, res};
  double lo0 = 0.0;
  const double h0 = aligned_axis(it->center() - 0.5 * it->width, cells[0], lo0);
  dom.bbox.lo[0] = lo0;
  dom.bbox.hi[0] = lo0 + cells[0] * h0;
  // Axis 1: cell size r/M so that y = 1 and y = 1 + r (and their mirrors when
  // 1/h is integral) are faces.
  {
    const double height = dom.bbox.hi[1] - dom.bbox.lo[1];
    const int M = std::max(1, static_cast<int>(std::lround(it->r * res / height)));
    const double h1 = it->r / M;
    const double lo1 = 1.0 - h1 * std::ceil((1.0 - dom.bbox.lo[1]) / h1 - 1e-12);
    cells[1] = static_cast<int>(std::ceil((dom.bbox.hi[1] - lo1) / h1 - 1e-12));
    dom.bbox.lo[1] = lo1;
    dom.bbox.hi[1] = lo1 + cells[1] * h1;
  }
  if (spec.dim == 3) {
    double lo2 = 0.0;
    const double h2 = aligned_axis(0.5 - 0.5 * it->width, cells[2], lo2);
    dom.bbox.lo[2] = lo2;
    dom.bbox.hi[2] = lo2 + cells[2] * h2;
  }
  return discretize(dom, cells);
}

double counterexample_height(const MushroomSpec& spec, int k, double p) {
  if (!(p >= 1.0)) throw InputError("counterexample: p must be >= 1");
  const double r = spec.r(k);
  return std::pow(std::pow(r, p - 1.0) / (2.0 * std::pow(spec.phi(r), spec.dim - 1)), 1.0 / p);
}

double counterexample_gradient_modular(const MushroomSpec& spec, int k, double p) {
  const double r = spec.r(k);
  const double F = counterexample_height(spec, k, p);
  // Two necks of measure r phi^(n-1) carrying |grad u| = F / r.
  return 2.0 * r * std::pow(spec.phi(r), spec.dim - 1) * std::pow(F / r, p);
}

Counterexample counterexample_field(const MushroomSpec& spec, const Discretization& disc, int k, double p) {
  const auto slots = mushroom_layout(spec);
  auto it = std::find_if(slots.begin(), slots.end(), [&](const MushroomSlot& s) { return s.index == k; });
  if (it == slots.end()) throw InputError("counterexample: mushroom k is not realized by the layout");
  const MushroomSlot s = *it;
  const double F = counterexample_height(spec, k, p);
  const int dim = spec.dim;
  const Grid& g = disc.grid;
  std::vector<double> u(g.size(), 0.0);
  std::vector<double> grad(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!disc.mask[i]) continue;
    const Point x = g.center(i);
    const double sign = x[1] >= 0.5 ? 1.0 : -1.0;
    const double y = 0.5 + std::fabs(x[1] - 0.5);
    if (y <= 1.0) continue;
    const bool in_cap = x[0] > s.cap_lo && x[0] < s.cap_lo + 2.0 * s.r && y > 1.0 + s.r &&
                        (dim == 2 || std::fabs(x[2] - 0.5) < s.r);
    const bool in_neck = std::fabs(x[0] - s.center()) < 0.5 * s.width && y <= 1.0 + s.r &&
                         (dim == 2 || std::fabs(x[2] - 0.5) < 0.5 * s.width);
    if (in_neck) {
      u[i] = sign * F * (y - 1.0) / s.r;
      grad[i] = F / s.r;
    } else if (in_cap) {
      u[i] = sign * F;
    }
  }
  return Counterexample{GridField(g, disc.mask, std::move(u)), GridField(g, disc.mask, std::move(grad)), F};
}

DivergenceProfile divergence_profile(int dim, const kernels::PhiKernel& phi, const RadiusSequence& radii, double p,
                                     const orlicz::OrliczFunction& H, int k_max) {
  if (k_max < 2) throw InputError("divergence_profile: k_max must be >= 2");
  MushroomSpec spec;
  spec.dim = dim;
  spec.phi = phi;
  spec.radii = radii;
  DivergenceProfile out;
  for (int k = 1; k <= k_max; ++k) {
    const double r = radii.at(k);
    const double F = counterexample_height(spec, k, p);
    out.k.push_back(k);
    out.r.push_back(r);
    out.F.push_back(F);
    out.E.push_back(2.0 * std::pow(r, dim) * H(F));
  }
  const std::size_t N = out.E.size();
  bool monotone = true;
  for (std::size_t i = N / 2 + 1; i < N; ++i) monotone = monotone && out.E[i] > out.E[i - 1];
  const bool large = out.E.front() > 0.0 && out.E.back() / out.E.front() > 10.0;
  out.verdict = monotone && large ? "diverges" : "bounded";
  return out;
}

}  // namespace rieszlab::domains
