// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "morrey/grid.hpp"
#include "morrey/local_integrals.hpp"
#include "morrey/norms.hpp"

namespace morrey {

/// Sampled curve t -> value with strictly increasing t.
struct Curve {
  Eigen::ArrayXd t;
  Eigen::ArrayXd value;

  /// Piecewise-linear in t through (0, 0) and the samples, constant past the last one.
  double at(double t) const;
};

struct ThresholdResult {
  double k = 0.0;
  double r_k = 0.0;
  double achieved_density = 0.0;
};

/// Ω_r(g) = {|g| >= r}
Mask superlevel_mask(const GridFunction& g, double level);

/// g·(1 - χ_{Ω_r(g)})
GridFunction truncate(const GridFunction& g, double level);

/// sup over included centers and ladder radii of ρ^{-n}·|E ∩ B_ρ(x)|_h.
double local_density(const Mask& e, const RadiusLadder& ladder);

struct SigmaOptions {
  /// Superlevel candidates: at most this many levels, picked by rank among the distinct |g| values.
  int max_levels = 48;
  /// Ball candidates are centered at the cells with the largest |g|.
  int ball_centers = 8;
};

struct SigmaCandidate {
  Mask set;
  double density = 0.0;
  double norm = 0.0;  // ‖g·χ_E‖_{ℳ^{p,s}}
  std::string label;
};

/// Candidate family for the σ estimate: superlevel sets of |g| and discrete balls.
std::vector<SigmaCandidate> sigma_candidates(const GridFunction& g, const MorreyParams& params,
                                             const RadiusLadder& ladder, const SigmaOptions& options = {});

/// Largest admissible density threshold: ω_n, or the local density of Ω
/// itself when lattice quantization pushes it above ω_n (2.24 for 7 cells in
/// a ball of 3.125 cells in 1D).
double density_cap(const GridPtr& grid, const RadiusLadder& ladder);

/// `count` geometric thresholds from top·2^{-10} up to top.
Eigen::ArrayXd geometric_t_ladder(double top, int count = 16);
/// top = ω_n
Eigen::ArrayXd default_t_ladder(int n, int count = 16);
/// top = density_cap(grid, ladder), so E = Ω is admissible at the last point
Eigen::ArrayXd default_t_ladder(const GridPtr& grid, const RadiusLadder& ladder, int count = 16);

/// Lower estimate of σ^{p,s}_g on the t ladder: the largest candidate norm
/// among candidates with local density <= t. Nondecreasing by construction.
/// Errors: BadParams unless t increases within (0, density_cap].
Curve sigma_estimate(const GridFunction& g, const MorreyParams& params, const RadiusLadder& ladder,
                     const Eigen::ArrayXd& t_ladder, const SigmaOptions& options = {});
Curve sigma_estimate(const std::vector<SigmaCandidate>& candidates, const Eigen::ArrayXd& t_ladder);

/// Least concave majorant of {(0,0)} ∪ σ̂ evaluated on the same ladder.
Curve dominating_envelope(const Curve& sigma);

Curve modulus_of_continuity(const GridFunction& g, const MorreyParams& params, const RadiusLadder& ladder,
                            const Eigen::ArrayXd& t_ladder, const SigmaOptions& options = {});

/// Smallest candidate level r with sup_x |Ω_r(g) ∩ B_d(x)|_h <= 1/k (raw measure).
ThresholdResult r_of_k(const GridFunction& g, double k);

/// Bounded, compactly supported smooth-ish proxy: truncate at `level`, zero the
/// collar of Chebyshev width `width` cells at the box/mask boundary, then run
/// `width` passes of a 3^n box average, re-zeroing the collar after each.
GridFunction mollified_truncation(const GridFunction& g, double level, int width);

/// Cells whose Chebyshev distance to the complement of Ω (box exterior or masked-out cells) exceeds `width`.
Mask interior_mask(const GridPtr& grid, int width);

/// Cells within Euclidean distance width·h of a flagged cell.
Mask dilate(const Mask& e, int width);

}  // namespace morrey
