// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "morrey/grid.hpp"

namespace morrey {

/// Discrete radii standing in for ρ ∈ ]0, d]. Strictly increasing, all in [2h, d].
class RadiusLadder {
 public:
  /// 2h, 2h·ratio, 2h·ratio², ... below d, then d itself.
  static RadiusLadder geometric(const DomainGrid& grid, double ratio = 1.25);
  static RadiusLadder from_radii(const DomainGrid& grid, std::vector<double> radii);

  const std::vector<double>& radii() const { return radii_; }
  Index size() const { return static_cast<Index>(radii_.size()); }
  double operator[](Index i) const { return radii_[static_cast<std::size_t>(i)]; }
  double ratio() const { return ratio_; }
  double min() const { return radii_.front(); }
  double max() const { return radii_.back(); }

 private:
  RadiusLadder(std::vector<double> radii, double ratio) : radii_(std::move(radii)), ratio_(ratio) {}
  std::vector<double> radii_;
  double ratio_;
};

/// Open-ball membership for a lattice offset z: |z|·h < ρ, evaluated in cell
/// units as |z|² < (ρ/h)². Shared by the stencil and the brute-force oracle.
inline bool in_open_ball(long long norm2, double radius_cells) {
  return static_cast<double>(norm2) < radius_cells * radius_cells;
}

/// Lattice offsets of B_ρ grouped into rows along the last (contiguous) axis.
class BallStencil {
 public:
  struct Row {
    std::array<Index, kMaxDim - 1> transverse{0, 0};  // offsets on axes 0..n-2
    Index half_width = 0;                              // along-axis offsets -hw..hw
  };

  BallStencil(double radius, double h, int n);

  double radius() const { return radius_; }
  int dim() const { return n_; }
  const std::vector<Row>& rows() const { return rows_; }
  Index cell_count() const;
  /// All offsets, rows in order, along-axis ascending.
  std::vector<MultiIndex> offsets() const;

 private:
  double radius_;
  int n_;
  std::vector<Row> rows_;
};

/// Errors: UnderResolved when ρ < 2h.
BallStencil ball_stencil(double radius, double h, int n);

/// m_p(x, ρ) = h^n Σ_{c ∈ Ω_ρ(x)} |g(c)|^p for every included center and ladder radius.
/// Rows index compact cells, columns index ladder radii.
class LocalIntegralField {
 public:
  LocalIntegralField(GridPtr grid, std::vector<double> radii, double exponent, Eigen::ArrayXXd values)
      : grid_(std::move(grid)), radii_(std::move(radii)), exponent_(exponent), values_(std::move(values)) {}

  const DomainGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const std::vector<double>& radii() const { return radii_; }
  double exponent() const { return exponent_; }
  const Eigen::ArrayXXd& values() const { return values_; }
  double operator()(Index cell, Index radius) const { return values_(cell, radius); }

 private:
  GridPtr grid_;
  std::vector<double> radii_;
  double exponent_;
  Eigen::ArrayXXd values_;
};

/// |x|^p with exact shortcuts for p = 1, 2.
inline double ppower(double x, double p) {
  const double a = x < 0 ? -x : x;
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  return std::pow(a, p);
}

/// Row-decomposed prefix-sum kernel. Errors: BadParams for p < 1.
LocalIntegralField ppower_field(const GridFunction& g, double p, const RadiusLadder& ladder);

/// Reference implementation by direct enumeration of all cell pairs.
LocalIntegralField ppower_field_bruteforce(const GridFunction& g, double p, const RadiusLadder& ladder);

/// |Ω_ρ(x)|_h
LocalIntegralField ball_measure_field(const GridPtr& grid, const RadiusLadder& ladder);
/// |E ∩ B_ρ(x)|_h
LocalIntegralField ball_measure_field(const Mask& e, const RadiusLadder& ladder);

/// CSV rows "x1[,x2[,x3]],rho,value".
void write_field_csv(std::ostream& os, const LocalIntegralField& field);

}  // namespace morrey
