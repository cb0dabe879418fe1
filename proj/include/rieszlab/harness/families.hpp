// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rieszlab/grid.hpp"
#include "rieszlab/harness/config.hpp"

namespace rieszlab::harness {

// A test field defined on the continuum, so that the same member can be
// sampled at every resolution.
struct FieldSpec {
  std::string id;
  std::function<double(const Point&)> fn;
  bool smoothing_pass = false;  // one masked box-average pass after sampling
};

// Nonnegative densities for potential-type experiments.
std::vector<FieldSpec> density_family(const Config& c, const DomainGeometry& dom);

// Smooth functions for gradient-based experiments (trig products, linear,
// quadratic).
std::vector<FieldSpec> smooth_family(const DomainGeometry& dom);

// Samples `spec` at cell centers.  With scale A != 1 the member is
// concentrated about `center`: x -> A^(n/p) fn(center + A (x - center)).
GridField sample_field(const Discretization& d, const FieldSpec& spec, double scale = 1.0, double p = 1.0,
                       const Point& center = {});

// One pass of the 3^n box average restricted to the mask.
GridField box_smooth(const GridField& f);

// Center and radius used to place family members inside the domain.
ReferenceBall placement_ball(const DomainGeometry& dom);

}  // namespace rieszlab::harness
