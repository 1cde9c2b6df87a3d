// SPDX-License-Identifier: Apache-2.0
#include "morrey/inequalities.hpp"

#include <cmath>
#include <optional>

namespace morrey {

namespace {

constexpr double kParamTol = 1e-12;

void require_pq(double p, double q, bool strict = false) {
  if (!(p >= 1.0) || !std::isfinite(q)) throw Error(ErrorKind::BadParams, "exponent p must be >= 1");
  if (strict ? !(p < q) : !(p <= q)) {
    throw Error(ErrorKind::BadParams, std::string("need p ") + (strict ? "<" : "<=") + " q, got p=" +
                                          format_double(p) + ", q=" + format_double(q));
  }
}

/// Tracks the entry that comes closest to (or furthest past) violating lhs <= rhs.
struct WorstEntry {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = -std::numeric_limits<double>::infinity();
  bool any = false;

  void offer(double l, double r) {
    const double m = l - r - check_tolerance(r);
    if (!any || m > margin) {
      lhs = l;
      rhs = r;
      margin = m;
      any = true;
    }
  }
};

double radius(const LocalIntegralField& field, Index k) { return field.radii()[static_cast<std::size_t>(k)]; }

}  // namespace

CheckResult check_linf_embedding(const GridFunction& g, const MorreyParams& params, const RadiusLadder& ladder,
                                 ConstantMode mode) {
  if (!(params.s >= 0.0)) throw Error(ErrorKind::BadParams, "L-infinity embedding needs s >= 0");
  const DomainGrid& grid = g.grid();
  const int n = grid.dim();
  const double lhs = morrey_norm(g, params, ladder).value;
  const double sup = g.abs_max();
  double constant = 0.0;
  if (mode == ConstantMode::Paper) {
    constant = std::pow(unit_ball_volume(n), 1.0 / params.p) * std::pow(grid.radius_cap(), params.s);
  } else {
    const LocalIntegralField measure = ball_measure_field(g.grid_ptr(), ladder);
    for (Index k = 0; k < ladder.size(); ++k) {
      const double rho = ladder[k];
      const double scale = std::pow(rho, params.s);
      const double inv = std::pow(rho, -n);
      for (Index c = 0; c < grid.size(); ++c) {
        constant = std::max(constant, scale * std::pow(inv * measure(c, k), 1.0 / params.p));
      }
    }
  }
  return make_check("linf_embedding", mode, lhs, constant * sup, constant,
                    {{"p", params.p}, {"s", params.s}, {"d", grid.radius_cap()}, {"sup_abs", sup}});
}

CheckResult check_lq_embedding(const GridFunction& g, double p, double q, double s, const RadiusLadder& ladder,
                               ConstantMode mode) {
  require_pq(p, q);
  const DomainGrid& grid = g.grid();
  const int n = grid.dim();
  if (s < n / q - kParamTol) throw Error(ErrorKind::BadParams, "L^q embedding needs s >= n/q");
  const double lhs = morrey_norm(g, MorreyParams{p, s}, ladder).value;
  const double lq = lp_norm(g, q);
  const double gap = 1.0 / p - 1.0 / q;
  double constant = 0.0;
  if (mode == ConstantMode::Paper) {
    constant = std::pow(unit_ball_volume(n), gap) * std::pow(grid.radius_cap(), s - n / q);
  } else {
    const LocalIntegralField measure = ball_measure_field(g.grid_ptr(), ladder);
    for (Index k = 0; k < ladder.size(); ++k) {
      const double weight = std::pow(ladder[k], s - n / p);
      for (Index c = 0; c < grid.size(); ++c) constant = std::max(constant, weight * std::pow(measure(c, k), gap));
    }
  }
  return make_check("lq_embedding", mode, lhs, constant * lq, constant,
                    {{"p", p}, {"q", q}, {"s", s}, {"d", grid.radius_cap()}, {"lq_norm", lq}});
}

CheckResult check_nesting(const GridFunction& g, double p, double q, double s, const RadiusLadder& ladder) {
  require_pq(p, q);
  const DomainGrid& grid = g.grid();
  const int n = grid.dim();
  const LocalIntegralField mp = ppower_field(g, p, ladder);
  const LocalIntegralField mq = ppower_field(g, q, ladder);
  const LocalIntegralField measure = ball_measure_field(g.grid_ptr(), ladder);
  const double gap = 1.0 / p - 1.0 / q;
  WorstEntry worst;
  double density_factor = 0.0;
  for (Index k = 0; k < ladder.size(); ++k) {
    const double rho = radius(mp, k);
    const double wp = std::pow(rho, s - n / p);
    const double wq = std::pow(rho, s - n / q);
    const double inv = std::pow(rho, -n);
    for (Index c = 0; c < grid.size(); ++c) {
      const double factor = std::pow(inv * measure(c, k), gap);
      density_factor = std::max(density_factor, factor);
      worst.offer(wp * std::pow(mp(c, k), 1.0 / p), wq * std::pow(mq(c, k), 1.0 / q) * factor);
    }
  }
  const double implied_lhs = morrey_norm(mp, s).value;
  const double implied_rhs = morrey_norm(mq, s).value * density_factor;
  return make_check("nesting", ConstantMode::Discrete, worst.lhs, worst.rhs, density_factor,
                    {{"p", p},
                     {"q", q},
                     {"s", s},
                     {"d", grid.radius_cap()},
                     {"implied_lhs", implied_lhs},
                     {"implied_rhs", implied_rhs}});
}

CheckResult check_lambda_mu(const GridFunction& g, double p, double q, double lambda, double mu,
                            const RadiusLadder& ladder, ConstantMode mode) {
  require_pq(p, q);
  const DomainGrid& grid = g.grid();
  const int n = grid.dim();
  if (!(lambda > 0.0) || !(mu > 0.0)) throw Error(ErrorKind::BadParams, "lambda and mu must be positive");
  if ((lambda - n) / p > (mu - n) / q + kParamTol) {
    throw Error(ErrorKind::BadParams, "need (lambda - n)/p <= (mu - n)/q");
  }
  const LocalIntegralField mp = ppower_field(g, p, ladder);
  const LocalIntegralField mq = ppower_field(g, q, ladder);
  const double ratio = p / q;
  const double d = grid.radius_cap();
  const double paper_c =
      std::pow(unit_ball_volume(n), 1.0 - ratio) * std::pow(d, n * (1.0 - ratio) + mu * ratio - lambda);
  std::optional<LocalIntegralField> measure;
  if (mode != ConstantMode::Paper) measure = ball_measure_field(g.grid_ptr(), ladder);
  WorstEntry worst;
  double constant = mode == ConstantMode::Paper ? paper_c : 0.0;
  for (Index k = 0; k < ladder.size(); ++k) {
    const double rho = radius(mp, k);
    for (Index c = 0; c < grid.size(); ++c) {
      double ce = paper_c;
      if (measure) {
        ce = std::pow((*measure)(c, k), 1.0 - ratio) * std::pow(rho, mu * ratio - lambda);
        constant = std::max(constant, ce);
      }
      const double lhs = std::pow(std::pow(rho, -lambda) * mp(c, k), 1.0 / p);
      const double rhs = std::pow(ce, 1.0 / p) * std::pow(std::pow(rho, -mu) * mq(c, k), 1.0 / q);
      worst.offer(lhs, rhs);
    }
  }
  return make_check("lambda_mu", mode, worst.lhs, worst.rhs, constant,
                    {{"p", p}, {"q", q}, {"lambda", lambda}, {"mu", mu}, {"d", d}});
}

CheckResult check_density(const GridFunction& g, double p, double q, double s, const RadiusLadder& ladder, int width,
                          double target_fraction) {
  require_pq(p, q);
  const int n = g.grid().dim();
  if (s < n / q - kParamTol) throw Error(ErrorKind::BadParams, "density check needs s >= n/q");
  if (width < 1) throw Error(ErrorKind::BadParams, "mollifier width must be >= 1");
  const MorreyParams params{p, s};
  const double norm = morrey_norm(g, params, ladder).value;
  const double top = g.abs_max();
  std::map<std::string, double> echo{{"p", p}, {"q", q}, {"s", s}, {"d", g.grid().radius_cap()},
                                     {"width", width}, {"norm", norm}};
  if (top == 0.0) {
    echo["monotone"] = 1.0;
    return make_check("density", ConstantMode::Discrete, 0.0, 0.0, target_fraction, std::move(echo),
                      "zero function");
  }
  constexpr int kIterates = 6;
  std::vector<double> distances;
  for (int j = 0; j < kIterates; ++j) {
    const double level = top * std::pow(2.0, j - (kIterates - 2));
    const int w = std::max(1, width >> j);
    try {
      const GridFunction phi = mollified_truncation(g, level, w);
      const double dist = morrey_norm(g - phi, params, ladder).value;
      echo["iterate_" + std::to_string(distances.size())] = dist;
      distances.push_back(dist);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UnderResolved) throw;
    }
  }
  if (distances.empty()) {
    return make_check("density", ConstantMode::Discrete, 0.0, 0.0, target_fraction, std::move(echo),
                      "inconclusive: no mollifier fits on this grid");
  }
  bool monotone = true;
  for (std::size_t i = 1; i < distances.size(); ++i) monotone = monotone && distances[i] <= distances[i - 1];
  echo["monotone"] = monotone ? 1.0 : 0.0;
  return make_check("density", ConstantMode::Discrete, distances.back(), target_fraction * norm, target_fraction,
                    std::move(echo), monotone ? "" : "distance sequence not monotone");
}

CheckResult check_sigma_holder(const GridFunction& g, double p, double q, double s, const RadiusLadder& ladder,
                               const Eigen::ArrayXd& t_ladder, const SigmaOptions& options) {
  require_pq(p, q, true);
  const std::vector<SigmaCandidate> cands = sigma_candidates(g, MorreyParams{p, s}, ladder, options);
  const double mq = morrey_norm(g, MorreyParams{q, s}, ladder).value;
  const double gap = 1.0 / p - 1.0 / q;
  WorstEntry worst;
  for (const SigmaCandidate& c : cands) worst.offer(c.norm, mq * std::pow(c.density, gap));
  if (!worst.any) worst.offer(0.0, 0.0);
  std::map<std::string, double> echo{
      {"p", p}, {"q", q}, {"s", s}, {"d", g.grid().radius_cap()}, {"candidates", static_cast<double>(cands.size())}};
  if (t_ladder.size() > 0) {
    const Curve sigma = sigma_estimate(cands, t_ladder);
    double excess = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < sigma.t.size(); ++i) {
      excess = std::max(excess, sigma.value(i) - mq * std::pow(sigma.t(i), gap));
    }
    echo["curve_max_excess"] = excess;
  }
  return make_check("sigma_holder", ConstantMode::Discrete, worst.lhs, worst.rhs, mq, std::move(echo));
}

CheckResult check_l1_sandwich(const GridFunction& v, double rho) {
  const DomainGrid& grid = v.grid();
  const int n = grid.dim();
  if (rho > grid.radius_cap() * (1.0 + kParamTol)) throw Error(ErrorKind::BadParams, "rho must not exceed d");
  const RadiusLadder ladder = RadiusLadder::from_radii(grid, {rho});
  const double omega = unit_ball_volume(n);
  const double bound = omega * std::pow(1.0 + 3.0 * grid.spacing() / rho, n);
  std::map<std::string, double> echo{{"rho", rho}, {"h", grid.spacing()}, {"d", grid.radius_cap()}};
  const double l1 = lp_norm(v, 1.0);
  if (l1 == 0.0) {
    return make_check("l1_sandwich", ConstantMode::Discrete, 0.0, bound, omega, std::move(echo),
                      "v vanishes: ratio undefined, vacuous pass");
  }
  const LocalIntegralField m1 = ppower_field(v, 1.0, ladder);
  const double inv = std::pow(rho, -n);
  double total = 0.0;
  for (Index c = 0; c < grid.size(); ++c) total += inv * m1(c, 0);
  total *= grid.cell_volume();
  const double ratio = total / l1;
  echo["ratio_rel_deviation"] = ratio / omega - 1.0;
  CheckResult r = make_check("l1_sandwich", ConstantMode::Discrete, ratio, bound, omega, std::move(echo));
  r.pass = r.pass && ratio > 0.0;
  return r;
}

CheckResult check_chebyshev(const GridFunction& g, double level, const MorreyParams& params,
                            const RadiusLadder& ladder) {
  if (!(level > 0.0)) throw Error(ErrorKind::BadParams, "Chebyshev check needs r > 0");
  const DomainGrid& grid = g.grid();
  const int n = grid.dim();
  const Mask above = superlevel_mask(g, level);
  const double scale = std::pow(level, params.p);
  double lhs = 0.0;
  if (above.count() > 0) {
    const LocalIntegralField measure = ball_measure_field(above, ladder);
    for (Index k = 0; k < ladder.size(); ++k) {
      const double w = scale * std::pow(ladder[k], params.s * params.p - n);
      for (Index c = 0; c < grid.size(); ++c) lhs = std::max(lhs, w * measure(c, k));
    }
  }
  const double norm = morrey_norm(g, params, ladder).value;
  return make_check("chebyshev", ConstantMode::Discrete, lhs, std::pow(norm, params.p), 1.0,
                    {{"p", params.p}, {"s", params.s}, {"r", level}, {"d", grid.radius_cap()}});
}

void validate_h2(int n, const MultiplicationParams& params) {
  require_pq(params.p, params.q);
  if (params.r_order < 1) throw Error(ErrorKind::BadParams, "Sobolev order r must be a positive integer");
  const double nr = static_cast<double>(n) / params.r_order;
  if (params.q < nr) throw Error(ErrorKind::BadParams, "h2 needs q >= n/r");
  if (nr == params.p && params.p > 1.0 && !(params.q > nr)) {
    throw Error(ErrorKind::BadParams, "h2 needs q > n/r when n/r = p > 1");
  }
  if (params.s > params.p) throw Error(ErrorKind::BadParams, "need s <= p");
}

namespace {

std::map<std::string, double> echo_mult(const DomainGrid& grid, const MultiplicationParams& params) {
  return {{"p", params.p}, {"q", params.q}, {"s", params.s},
          {"r_order", static_cast<double>(params.r_order)}, {"d", grid.radius_cap()}};
}

}  // namespace

CheckResult check_multiplication(const GridFunction& g, const GridFunction& u, const MultiplicationParams& params,
                                 const RadiusLadder& ladder) {
  require_same_grid(g.grid(), u.grid());
  validate_h2(g.grid().dim(), params);
  const double num = lp_norm(g * u, params.p);
  const double mg = morrey_norm(g, MorreyParams{params.q, params.s / params.p}, ladder).value;
  const double su = sobolev_norm(u, SobolevParams{params.r_order, params.p});
  auto echo = echo_mult(g.grid(), params);
  echo["norm_gu"] = num;
  echo["morrey_g"] = mg;
  echo["sobolev_u"] = su;
  std::string note;
  double ratio = 0.0;
  if (mg == 0.0 || su == 0.0) {
    note = "zero denominator: ratio set to 0";
  } else {
    ratio = num / (mg * su);
  }
  return make_check("multiplication", ConstantMode::Empirical, ratio, std::numeric_limits<double>::max(), ratio,
                    std::move(echo), std::move(note));
}

CheckResult check_eps_split(const GridFunction& g, const GridFunction& u, const MultiplicationParams& params,
                            const RadiusLadder& ladder, const GridFunction& phi, double corpus_ratio) {
  require_same_grid(g.grid(), u.grid());
  require_same_grid(g.grid(), phi.grid());
  const GridFunction rest = g - phi;
  const double lhs = lp_norm(g * u, params.p);
  const double sup_phi = phi.abs_max();
  const double rhs = lp_norm(rest * u, params.p) + sup_phi * lp_norm(u, params.p);
  auto echo = echo_mult(g.grid(), params);
  echo["sup_phi"] = sup_phi;
  if (std::isfinite(corpus_ratio)) {
    validate_h2(g.grid().dim(), params);
    echo["eps_hat"] = corpus_ratio * morrey_norm(rest, MorreyParams{params.q, params.s / params.p}, ladder).value *
                      sobolev_norm(u, SobolevParams{params.r_order, params.p});
  }
  return make_check("eps_split", ConstantMode::Discrete, lhs, rhs, sup_phi, std::move(echo));
}

CheckResult check_support_split(const GridFunction& g, const GridFunction& u, const MultiplicationParams& params,
                                const RadiusLadder& ladder, double level, int width) {
  (void)ladder;
  require_same_grid(g.grid(), u.grid());
  const GridFunction phi = mollified_truncation(g, level, width);
  const Mask support(phi.grid_ptr(), phi.values() != 0.0);
  const Mask hull = dilate(support, width);
  const double sup_phi = phi.abs_max();
  const double lhs = lp_norm(g * u, params.p);
  const double rhs = lp_norm((g - phi) * u, params.p) + sup_phi * lp_norm(restrict_to(u, hull), params.p);
  auto echo = echo_mult(g.grid(), params);
  echo["level"] = level;
  echo["width"] = width;
  echo["sup_phi"] = sup_phi;
  echo["support_cells"] = static_cast<double>(support.count());
  echo["dilated_cells"] = static_cast<double>(hull.count());
  return make_check("support_split", ConstantMode::Discrete, lhs, rhs, sup_phi, std::move(echo));
}

CheckResult check_tau_bound(const GridFunction& g, const GridFunction& u, const MultiplicationParams& params,
                            const RadiusLadder& ladder, double k, const Eigen::ArrayXd& t_ladder) {
  require_same_grid(g.grid(), u.grid());
  const ThresholdResult thr = r_of_k(g, k);
  const Mask above = superlevel_mask(g, thr.r_k);
  const GridFunction tail = restrict_to(g, above);
  const double lhs = lp_norm(g * u, params.p);
  const double rhs = lp_norm(tail * u, params.p) + thr.r_k * lp_norm(u, params.p);
  auto echo = echo_mult(g.grid(), params);
  echo["k"] = k;
  echo["r_k"] = thr.r_k;
  echo["achieved_density"] = thr.achieved_density;
  const MorreyParams space{params.q, params.s / params.p};
  echo["morrey_factor"] = above.count() == 0 ? 0.0 : morrey_norm(tail, space, ladder).value;
  if (t_ladder.size() > 0) {
    const double density = local_density(above, ladder);
    echo["local_density"] = density;
    echo["tau_at_density"] = modulus_of_continuity(g, space, ladder, t_ladder).at(density);
  }
  return make_check("tau_bound", ConstantMode::Discrete, lhs, rhs, thr.r_k, std::move(echo));
}

}  // namespace morrey
