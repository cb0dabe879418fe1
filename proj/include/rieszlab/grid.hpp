// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rieszlab {

// Points always carry three coordinates; in two dimensions the third is 0.
using Point = std::array<double, 3>;

struct Box {
  Point lo{};
  Point hi{};
};

// Uniform lattice of cells over a box.  Cells are stored lexicographically
// with axis 0 fastest, so a run of consecutive indices is a row along x1.
class Grid {
 public:
  Grid(int dim, const Box& bbox, const std::array<int, 3>& res);

  int dim() const { return dim_; }
  const Box& bbox() const { return bbox_; }
  int res(int axis) const { return res_[axis]; }
  const std::array<int, 3>& res() const { return res_; }
  double spacing(int axis) const { return spacing_[axis]; }
  double min_spacing() const;
  double cellvol() const { return cellvol_; }
  double diameter() const;
  std::size_t size() const { return size_; }
  std::size_t row_count() const { return size_ / static_cast<std::size_t>(res_[0]); }

  std::size_t index(int i, int j, int k = 0) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(res_[0]) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(res_[1]) * static_cast<std::size_t>(k));
  }
  std::array<int, 3> unravel(std::size_t idx) const;
  Point center(std::size_t idx) const;
  double center_coord(int axis, int i) const {
    return bbox_.lo[axis] + (static_cast<double>(i) + 0.5) * spacing_[axis];
  }

  // The cell whose closed extent contains x (upper faces go to the lower
  // cell), or nullopt when x lies outside the box.
  std::optional<std::size_t> cell_of(const Point& x) const;

 private:
  int dim_;
  Box bbox_;
  std::array<int, 3> res_;
  std::array<double, 3> spacing_;
  double cellvol_;
  std::size_t size_;
};

struct ReferenceBall {
  Point center{};
  double radius = 0.0;
};

// An open set given by a membership predicate restricted to a bounding box.
struct DomainGeometry {
  std::string label;
  int dim = 2;
  Box bbox;
  std::function<bool(const Point&)> predicate;
  std::optional<ReferenceBall> reference_ball;

  bool inside(const Point& p) const;
};

struct Discretization {
  Grid grid;
  std::vector<std::uint8_t> mask;
  std::size_t masked = 0;
};

// Cell-center collocation of a domain.  `res` must be >= 8 on every used axis.
Discretization discretize(const DomainGeometry& dom, const std::array<int, 3>& res);
Discretization discretize(const DomainGeometry& dom, int res);

// A scalar field on the masked cells of a grid.  Off-mask values are held at 0.
struct GridField {
  Grid grid;
  std::vector<std::uint8_t> mask;
  std::vector<double> values;

  GridField(Grid g, std::vector<std::uint8_t> m, std::vector<double> v);

  static GridField zeros(const Discretization& d);
  static GridField sample(const Discretization& d, const std::function<double(const Point&)>& fn);

  std::size_t masked_count() const;
  bool masked(std::size_t idx) const { return mask[idx] != 0; }
  double max_abs() const;
  GridField scaled(double c) const;
  GridField abs() const;
};

GridField gradient_magnitude(const GridField& u);

double lp_norm(const GridField& u, double p);
double llogl_norm(const GridField& u);
double domain_average(const GridField& u);
double ball_average(const GridField& u, const Point& x, double r);

// u - c on the mask.
GridField subtract_constant(const GridField& u, double c);

// One CSV line per masked cell: index, coordinates, value.
void write_field_csv(std::ostream& out, const GridField& u, const std::string& value_name = "value");

}  // namespace rieszlab
