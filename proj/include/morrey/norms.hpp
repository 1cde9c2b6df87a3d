// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "morrey/check_result.hpp"
#include "morrey/expr.hpp"
#include "morrey/grid.hpp"
#include "morrey/local_integrals.hpp"

namespace morrey {

struct MorreyParams {
  double p = 1.0;
  double s = 0.0;
};

struct SobolevParams {
  int r = 1;
  double p = 1.0;
};

/// Ladder lower bound on sup over (x, ρ) of ρ^{s-n/p}·‖g‖_{L^p(Ω_ρ(x))}.
struct MorreyNormResult {
  double value = 0.0;
  Coord arg_center;
  double arg_radius = 0.0;
  Index arg_cell = 0;
  Index arg_radius_index = 0;
};

/// (h^n Σ |g|^p)^{1/p}
double lp_norm(const GridFunction& g, double p);

MorreyNormResult morrey_norm(const GridFunction& g, const MorreyParams& params, const RadiusLadder& ladder);

/// Same sup from an already computed p-power field. Ties go to the smallest ρ,
/// then the lowest cell index.
MorreyNormResult morrey_norm(const LocalIntegralField& field, double s);

/// Per-entry values ρ^{s-n/p}·m_p(x,ρ)^{1/p}.
Eigen::ArrayXXd morrey_entries(const LocalIntegralField& field, double s);

struct ClassicalMorreyResult {
  MorreyNormResult norm;
  double s = 0.0;                 // (n - λ)/p
  std::optional<std::string> warning;  // λ outside [0, n]
};

/// L^{p,λ} norm through its identification with ℳ^{p,(n-λ)/p}.
ClassicalMorreyResult classical_morrey_norm(const GridFunction& g, double p, double lambda, const RadiusLadder& ladder);

/// One finite-difference derivative along `axis`: central where both
/// neighbours are in Ω, one-sided otherwise, 0 for cells isolated on that axis.
GridFunction difference(const GridFunction& u, int axis);

/// (Σ_{|α| ≤ r} ‖D^α_h u‖_p^p)^{1/p}. Errors: UnderResolved when an axis has fewer than r+1 cells.
double sobolev_norm(const GridFunction& u, const SobolevParams& params);

/// Refinement study for s < 0 at h' ∈ {2h, h, h/2}: the norm lower bound must
/// grow by at least 2^{0.9|s|} per halving (or stay identically zero).
CheckResult degenerate_check(const Expression& g, const GridSpec& base, const MorreyParams& params,
                             double ladder_ratio = 1.25);

}  // namespace morrey
