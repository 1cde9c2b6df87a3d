// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "morrey/error.hpp"

namespace morrey {

inline constexpr int kMaxDim = 3;

using Index = Eigen::Index;
/// Point coordinates, dynamic length with inline storage for up to kMaxDim.
using Coord = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using MultiIndex = std::array<Index, kMaxDim>;
using BoolArray = Eigen::Array<bool, Eigen::Dynamic, 1>;

struct Box {
  Coord lower;
  Coord upper;
};

/// Predicate on cell centers, or dense row-major flags (one per box cell).
using MaskSpec = std::variant<std::monostate, std::function<bool(const Coord&)>, std::vector<bool>>;

struct GridSpec {
  int n = 1;
  Box box;
  double h = 0.0;
  double d = 0.0;
  MaskSpec mask;
};

/// Uniform lattice on a box with an inclusion mask. Cell centers sit at
/// lower + (i + 1/2) h, laid out row-major with axis 0 slowest. Included
/// cells are numbered 0..size()-1 in dense order ("compact" indices).
class DomainGrid {
 public:
  DomainGrid(const GridSpec& spec);

  int dim() const { return n_; }
  double spacing() const { return h_; }
  double radius_cap() const { return d_; }
  double cell_volume() const { return cell_volume_; }
  const Box& box() const { return box_; }
  Index extent(int axis) const { return extent_[static_cast<std::size_t>(axis)]; }

  Index dense_size() const { return static_cast<Index>(included_dense_.size()); }
  Index size() const { return static_cast<Index>(compact_to_dense_.size()); }

  bool included_dense(Index dense) const { return included_dense_[static_cast<std::size_t>(dense)]; }
  Index dense_index(Index compact) const { return compact_to_dense_[static_cast<std::size_t>(compact)]; }
  /// -1 for cells outside the mask.
  Index compact_index(Index dense) const { return dense_to_compact_[static_cast<std::size_t>(dense)]; }

  MultiIndex multi_index(Index dense) const;
  Index dense_from_multi(const MultiIndex& m) const;
  bool in_box(const MultiIndex& m) const;

  Coord dense_center(Index dense) const;
  Coord center(Index compact) const { return dense_center(dense_index(compact)); }

  /// Same lattice (box, spacing, cap) and same mask.
  bool operator==(const DomainGrid& other) const;

 private:
  int n_;
  Box box_;
  double h_;
  double d_;
  double cell_volume_;
  std::array<Index, kMaxDim> extent_{1, 1, 1};
  std::vector<bool> included_dense_;
  std::vector<Index> compact_to_dense_;
  std::vector<Index> dense_to_compact_;
};

using GridPtr = std::shared_ptr<const DomainGrid>;

/// Validates and builds a grid. Errors: BadGeometry, UnderResolved, EmptyDomain.
GridPtr build_grid(const GridSpec& spec);
GridPtr build_grid(int n, const Box& box, double h, double d, MaskSpec mask = {});

/// Box from a flat list lo_0, hi_0, lo_1, hi_1, ...
Box make_box(const std::vector<double>& bounds);

/// Same box, spacing and cap as `grid`, with a smaller mask.
GridPtr with_mask(const GridPtr& grid, const MaskSpec& mask);

/// Real values, one per included cell.
class GridFunction {
 public:
  GridFunction(GridPtr grid, Eigen::ArrayXd values);
  static GridFunction zeros(GridPtr grid);
  static GridFunction constant(GridPtr grid, double value);

  const GridPtr& grid_ptr() const { return grid_; }
  const DomainGrid& grid() const { return *grid_; }
  const Eigen::ArrayXd& values() const { return values_; }
  Index size() const { return values_.size(); }
  double operator[](Index i) const { return values_(i); }

  /// max |g| (0 when empty).
  double abs_max() const;

 private:
  GridPtr grid_;
  Eigen::ArrayXd values_;
};

/// Subset of included cells (E in Σ(Ω) restricted to finite cell unions).
class Mask {
 public:
  Mask(GridPtr grid, BoolArray flags);
  static Mask none(GridPtr grid);
  static Mask all(GridPtr grid);

  const GridPtr& grid_ptr() const { return grid_; }
  const DomainGrid& grid() const { return *grid_; }
  const BoolArray& flags() const { return flags_; }
  bool operator[](Index i) const { return flags_(i); }
  Index count() const { return flags_.count(); }

 private:
  GridPtr grid_;
  BoolArray flags_;
};

/// Throws BadParams unless both live on the same lattice.
void require_same_grid(const DomainGrid& a, const DomainGrid& b);

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
/// Pointwise product.
GridFunction operator*(const GridFunction& a, const GridFunction& b);
GridFunction operator*(double c, const GridFunction& g);
/// g·χ_E
GridFunction restrict_to(const GridFunction& g, const Mask& e);
Mask operator|(const Mask& a, const Mask& b);
Mask operator&(const Mask& a, const Mask& b);

/// Restriction of g to a grid with the same lattice and a mask ⊆ g's mask.
GridFunction restrict_to_grid(const GridFunction& g, const GridPtr& subgrid);

/// π^{n/2} / Γ(n/2 + 1)
double unit_ball_volume(int n);

class Expression;
/// Midpoint sampling. Errors: BadParams (arity > n), NonFiniteSample.
GridFunction sample(const Expression& e, const GridPtr& grid);

/// MGRID v1 text dump; bit-exact round trip.
void write_dump(std::ostream& os, const GridFunction& g);
GridFunction read_dump(std::istream& is);
/// Reads a dump and returns its grid (values ignored).
GridPtr read_grid_dump(std::istream& is);

/// printf("%.17g")
std::string format_double(double x);

}  // namespace morrey
