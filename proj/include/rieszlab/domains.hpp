// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "rieszlab/grid.hpp"
#include "rieszlab/kernels.hpp"
#include "rieszlab/orlicz.hpp"

namespace rieszlab::domains {

// Open ball; bounding box is the enclosing cube.
DomainGeometry ball_domain(int dim, const Point& center, double radius);
// Open axis-aligned box with its inscribed reference ball.
DomainGeometry box_domain(int dim, const Box& box);
DomainGeometry unit_cube(int dim);

// r_k = r0 * ratio^k
struct RadiusSequence {
  double r0 = 1.0;
  double ratio = 0.5;
  double at(int k) const;
};

// Unit cube Q0 = (0,1)^n with `count` cap-and-neck appendages on the face
// x2 = 1 and their mirror images across x2 = 1/2.  Mushroom k has a cap of
// side 2 r_k and a neck of length r_k (along x2) and width phi(r_k).
struct MushroomSpec {
  int dim = 2;
  kernels::PhiKernel phi = kernels::PhiKernel::identity();
  RadiusSequence radii;
  int first_index = 1;  // index k of the first realized mushroom
  int count = 1;

  double r(int k) const { return radii.at(k); }
  int last_index() const { return first_index + count - 1; }
};

struct MushroomSlot {
  int index = 0;
  double cap_lo = 0.0;  // cap occupies x1 in (cap_lo, cap_lo + 2r)
  double r = 0.0;
  double width = 0.0;   // phi(r)
  double center() const { return cap_lo + r; }
};

// Slots packed left to right from x1 = 0 with a gap of r_first / 2.  Throws
// InputError naming the largest count that fits when they overflow the face.
std::vector<MushroomSlot> mushroom_layout(const MushroomSpec& spec);

DomainGeometry mushroom_build(const MushroomSpec& spec);

// Grid over the mushroom bounding box with `res` cells per axis, shifted and
// stretched slightly along x1 (and x3) so that the walls of neck `align_k`
// fall on cell faces.
Discretization mushroom_discretize(const MushroomSpec& spec, int res, int align_k);

struct Counterexample {
  GridField u;
  GridField grad;  // exact |grad u|
  double F = 0.0;
};

// F(r) = (r^(p-1) / (2 phi(r)^(n-1)))^(1/p)
double counterexample_height(const MushroomSpec& spec, int k, double p);

// u_k: F on cap k, -F on its mirror, linear through the necks, 0 elsewhere.
Counterexample counterexample_field(const MushroomSpec& spec, const Discretization& disc, int k, double p);

// Closed-form integral of |grad u_k|^p over the domain.
double counterexample_gradient_modular(const MushroomSpec& spec, int k, double p);

struct DivergenceProfile {
  std::vector<int> k;
  std::vector<double> r;
  std::vector<double> F;
  std::vector<double> E;  // 2 r_k^n H(F(r_k))
  std::string verdict;    // "diverges" or "bounded"
};

DivergenceProfile divergence_profile(int dim, const kernels::PhiKernel& phi, const RadiusSequence& radii, double p,
                                     const orlicz::OrliczFunction& H, int k_max);

// Parameters of a phi-John domain, held as data only.
struct JohnSpec {
  kernels::PhiKernel phi = kernels::PhiKernel::identity();
  double c_J = 1.0;
  Point x0{};
};

}  // namespace rieszlab::domains
