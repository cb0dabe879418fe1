// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rieszlab/grid.hpp"
#include "rieszlab/kernels.hpp"
#include "rieszlab/numeric.hpp"

namespace rieszlab::potentials {

enum class SingularRule { ExcludeSelfCell, CapAtHalfCell };

const char* rule_name(SingularRule rule);

struct PotentialOptions {
  SingularRule singular_rule = SingularRule::ExcludeSelfCell;
  // Radii for the maximal function.  Empty means default_radii(grid).
  std::vector<double> radii;
};

// h, 2h, 4h, ... below the grid diameter, then the diameter itself
// (h = smallest spacing).
std::vector<double> default_radii(const Grid& grid);

// Validated radius list for `grid`: strictly increasing, first >= spacing,
// last >= diameter.
std::vector<double> resolve_radii(const Grid& grid, const PotentialOptions& opts);

// I_phi f(x) = sum over masked cells y of |f(y)| phi(|x-y|)^(1-n) cellvol.  The
// cell containing x is dropped or capped per the singular rule.
double riesz_potential(const GridField& f, const kernels::PhiKernel& phi, const Point& x,
                       const PotentialOptions& opts = {});

// The same split at radius delta: `inner` over cells with |x-y| < delta,
// `outer` over the rest.
struct SplitPotential {
  double inner = 0.0;
  double outer = 0.0;
};
SplitPotential riesz_potential_split(const GridField& f, const kernels::PhiKernel& phi, const Point& x,
                                     double delta, const PotentialOptions& opts = {});

// Field-wide potential at every masked cell center.  Precomputes the kernel on
// lattice offsets; reuse one operator for many fields on the same grid.
class RieszOperator {
 public:
  RieszOperator(const Grid& grid, const kernels::PhiKernel& phi, SingularRule rule = SingularRule::ExcludeSelfCell);

  GridField apply(const GridField& f) const;
  // Potential at the centers of the listed cells only; `targets` need not be
  // masked.
  std::vector<double> apply_at(const GridField& f, std::span<const std::size_t> targets) const;

  const Grid& grid() const { return grid_; }

 private:
  struct Run {
    std::size_t row;  // row index (j + res1 * k)
    int begin;
    int end;
  };
  std::vector<Run> runs_of(const GridField& f) const;
  double at_cell(const std::vector<double>& absf, const std::vector<Run>& runs, std::size_t target) const;

  Grid grid_;
  int n_;
  std::vector<double> table_;  // [dz][dy][dx + res0 - 1]
};

GridField riesz_potential(const GridField& f, const kernels::PhiKernel& phi, const PotentialOptions& opts = {});

// Discrete Hardy-Littlewood maximal function.  f is zero off its mask and the
// ball volume is the count of in-grid cells with centers in the open ball.
class MaximalOperator {
 public:
  MaximalOperator(const GridField& f, const PotentialOptions& opts = {});

  double at(const Point& x) const;
  GridField field() const;
  const std::vector<double>& radii() const { return radii_; }

 private:
  double ball_average(const Point& x, double r) const;

  Grid grid_;
  std::vector<std::uint8_t> mask_;
  double c_ref_ = 0.0;
  std::vector<double> prefix_;  // per row, res0 + 1 prefix sums of |f| - c_ref
  std::vector<double> radii_;
};

double maximal_function(const GridField& f, const Point& x, const PotentialOptions& opts = {});
GridField maximal_function(const GridField& f, const PotentialOptions& opts = {});

struct BallRatioCheck {
  double constant = 0.0;      // sup of the ratio over admissible points
  std::size_t admissible = 0;  // points that entered the sup
  bool vacuous = true;
  std::optional<Point> argmax;
};

// sup over x of [integral over B(x,delta) of |f| phi^(1-n)] / [h(delta) Mf(x)],
// skipping points with Mf(x) = 0.
BallRatioCheck annulus_bound_check(const GridField& f, const kernels::PhiKernel& phi, const ScalarMap& h, double delta,
                               std::span<const Point> points, const PotentialOptions& opts = {});

// sup over x of [integral outside B(x,delta) of |f| phi^(1-n)] /
// [phi(delta)^(1-n) delta^(n(1-1/p))].  Requires lp_norm(f, p) <= 1 + 1e-9.
BallRatioCheck tail_bound_check(const GridField& f, const kernels::PhiKernel& phi, double p, double delta,
                            std::span<const Point> points, const PotentialOptions& opts = {});

}  // namespace rieszlab::potentials
