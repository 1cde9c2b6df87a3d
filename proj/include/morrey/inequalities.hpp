// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <limits>

#include "morrey/approx.hpp"
#include "morrey/check_result.hpp"
#include "morrey/grid.hpp"
#include "morrey/local_integrals.hpp"
#include "morrey/norms.hpp"

namespace morrey {

// Discrete-constant checks are finite-sum identities (Hölder, triangle, sup
// bounds) and must pass to 1e-12 on any admissible input. Paper-constant
// checks use ω_n ρ^n in place of |Ω_ρ(x)|_h and may fail by lattice
// quantization; both are reported. The radius cap d is taken from the grid.

/// ‖g‖_{ℳ^{p,s}} <= ω_n^{1/p} d^s ‖g‖_∞ (paper) or the lattice constant
/// sup ρ^s (ρ^{-n}|Ω_ρ(x)|_h)^{1/p} (discrete). Requires s >= 0.
CheckResult check_linf_embedding(const GridFunction& g, const MorreyParams& params, const RadiusLadder& ladder,
                                 ConstantMode mode);

/// ‖g‖_{ℳ^{p,s}} <= c ‖g‖_{L^q} with c = ω_n^{1/p-1/q} d^{s-n/q} (paper) or
/// sup ρ^{s-n/p}|Ω_ρ(x)|_h^{1/p-1/q} (discrete). Requires 1 <= p <= q, s >= n/q.
CheckResult check_lq_embedding(const GridFunction& g, double p, double q, double s, const RadiusLadder& ladder,
                               ConstantMode mode);

/// Entrywise Hölder between ℳ^{q,s} and ℳ^{p,s}; reports the worst entry.
CheckResult check_nesting(const GridFunction& g, double p, double q, double s, const RadiusLadder& ladder);

/// (ρ^{-λ}∫|g|^p)^{1/p} <= c^{1/p} (ρ^{-μ}∫|g|^q)^{1/q} per entry, with
/// c = ω_n^{1-p/q} d^{n(1-p/q)+μp/q-λ} (paper) or |Ω_ρ(x)|_h^{1-p/q} ρ^{μp/q-λ} (discrete).
CheckResult check_lambda_mu(const GridFunction& g, double p, double q, double lambda, double mu,
                            const RadiusLadder& ladder, ConstantMode mode);

/// Approximation by mollified truncations at rising levels and shrinking
/// widths; pass when the last ‖g - φ‖_{ℳ^{p,s}} <= target_fraction·‖g‖_{ℳ^{p,s}}.
CheckResult check_density(const GridFunction& g, double p, double q, double s, const RadiusLadder& ladder,
                          int width, double target_fraction = 0.05);

/// ‖gχ_E‖_{ℳ^{p,s}} <= ‖g‖_{ℳ^{q,s}}·density(E)^{1/p-1/q} for every σ candidate E.
CheckResult check_sigma_holder(const GridFunction& g, double p, double q, double s, const RadiusLadder& ladder,
                               const Eigen::ArrayXd& t_ladder, const SigmaOptions& options = {});

/// Ratio h^n Σ_x ρ^{-n} m_1(x,ρ) / ‖v‖_1, required in (0, ω_n (1 + 3h/ρ)^n].
CheckResult check_l1_sandwich(const GridFunction& v, double rho);

/// sup r^p ρ^{sp-n}|Ω_r(g) ∩ Ω_ρ(x)|_h <= ‖g‖_{ℳ^{p,s}}^p.
CheckResult check_chebyshev(const GridFunction& g, double level, const MorreyParams& params,
                            const RadiusLadder& ladder);

struct MultiplicationParams {
  double p = 1.0;
  double q = 1.0;
  double s = 1.0;  // Morrey exponent of g is s/p
  int r_order = 1;
};

/// Throws BadParams unless 1 <= p <= q, r >= 1, q >= n/r (strictly when n/r = p > 1) and s <= p.
void validate_h2(int n, const MultiplicationParams& params);

/// R = ‖gu‖_p / (‖g‖_{ℳ^{q,s/p}} ‖u‖_{W^{r,p}}); pass <=> R finite.
CheckResult check_multiplication(const GridFunction& g, const GridFunction& u, const MultiplicationParams& params,
                                 const RadiusLadder& ladder);

/// ‖gu‖_p <= ‖(g-φ)u‖_p + ‖φ‖_∞‖u‖_p. With a finite corpus ratio, also reports
/// ε̂ = R̂·‖g-φ‖_{ℳ^{q,s/p}}·‖u‖_{W^{r,p}}.
CheckResult check_eps_split(const GridFunction& g, const GridFunction& u, const MultiplicationParams& params,
                            const RadiusLadder& ladder, const GridFunction& phi,
                            double corpus_ratio = std::numeric_limits<double>::quiet_NaN());

/// As check_eps_split with φ = mollified_truncation(g, level, width) and the
/// second term restricted to the width-dilation of supp φ.
CheckResult check_support_split(const GridFunction& g, const GridFunction& u, const MultiplicationParams& params,
                                const RadiusLadder& ladder, double level, int width);

/// ‖gu‖_p <= ‖gχ_{Ω_{r_k}}u‖_p + r_k‖u‖_p with r_k = r[g](k). Reports the
/// Morrey factor of gχ_{Ω_{r_k}} and τ̂ at the density of Ω_{r_k}; the τ̂
/// report is skipped when `t_ladder` is empty.
CheckResult check_tau_bound(const GridFunction& g, const GridFunction& u, const MultiplicationParams& params,
                            const RadiusLadder& ladder, double k, const Eigen::ArrayXd& t_ladder);

}  // namespace morrey
