// SPDX-License-Identifier: Apache-2.0
#include "morrey/norms.hpp"

#include <cmath>
#include <limits>

namespace morrey {

namespace {

void require_exponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorKind::BadParams, "exponent p must be >= 1");
}

}  // namespace

double lp_norm(const GridFunction& g, double p) {
  require_exponent(p);
  double sum = 0.0;
  for (Index c = 0; c < g.size(); ++c) sum += ppower(g[c], p);
  return std::pow(sum * g.grid().cell_volume(), 1.0 / p);
}

Eigen::ArrayXXd morrey_entries(const LocalIntegralField& field, double s) {
  const double p = field.exponent();
  const int n = field.grid().dim();
  Eigen::ArrayXXd out(field.values().rows(), field.values().cols());
  for (Index k = 0; k < out.cols(); ++k) {
    const double weight = std::pow(field.radii()[static_cast<std::size_t>(k)], s - n / p);
    for (Index c = 0; c < out.rows(); ++c) out(c, k) = weight * std::pow(field(c, k), 1.0 / p);
  }
  return out;
}

MorreyNormResult morrey_norm(const LocalIntegralField& field, double s) {
  const Eigen::ArrayXXd entries = morrey_entries(field, s);
  MorreyNormResult best;
  best.value = -1.0;
  for (Index k = 0; k < entries.cols(); ++k) {
    for (Index c = 0; c < entries.rows(); ++c) {
      if (entries(c, k) > best.value) {
        best.value = entries(c, k);
        best.arg_cell = c;
        best.arg_radius_index = k;
      }
    }
  }
  best.value = std::max(best.value, 0.0);
  best.arg_radius = field.radii()[static_cast<std::size_t>(best.arg_radius_index)];
  best.arg_center = field.grid().center(best.arg_cell);
  return best;
}

MorreyNormResult morrey_norm(const GridFunction& g, const MorreyParams& params, const RadiusLadder& ladder) {
  require_exponent(params.p);
  return morrey_norm(ppower_field(g, params.p, ladder), params.s);
}

ClassicalMorreyResult classical_morrey_norm(const GridFunction& g, double p, double lambda,
                                            const RadiusLadder& ladder) {
  require_exponent(p);
  const int n = g.grid().dim();
  ClassicalMorreyResult out;
  out.s = (n - lambda) / p;
  if (lambda < 0.0 || lambda > n) {
    out.warning = "lambda=" + format_double(lambda) + " is outside [0, n]; the classical identification covers s in [0, n/p] only";
  }
  out.norm = morrey_norm(g, MorreyParams{p, out.s}, ladder);
  return out;
}

GridFunction difference(const GridFunction& u, int axis) {
  const DomainGrid& grid = u.grid();
  if (axis < 0 || axis >= grid.dim()) throw Error(ErrorKind::BadParams, "difference axis out of range");
  const double h = grid.spacing();
  Eigen::ArrayXd out(grid.size());
  for (Index c = 0; c < grid.size(); ++c) {
    const MultiIndex m = grid.multi_index(grid.dense_index(c));
    const auto neighbour = [&](Index step) -> Index {
      MultiIndex q = m;
      q[static_cast<std::size_t>(axis)] += step;
      if (!grid.in_box(q)) return -1;
      return grid.compact_index(grid.dense_from_multi(q));
    };
    const Index fwd = neighbour(1);
    const Index bwd = neighbour(-1);
    if (fwd >= 0 && bwd >= 0) {
      out(c) = (u[fwd] - u[bwd]) / (2.0 * h);
    } else if (fwd >= 0) {
      out(c) = (u[fwd] - u[c]) / h;
    } else if (bwd >= 0) {
      out(c) = (u[c] - u[bwd]) / h;
    } else {
      out(c) = 0.0;
    }
  }
  return GridFunction(u.grid_ptr(), std::move(out));
}

namespace {

/// Adds ‖D^α u‖_p^p for every α with |α| ≤ order whose entries on axes < axis are fixed.
void accumulate_derivatives(const GridFunction& u, int axis, int order_left, double p, double& sum) {
  const int n = u.grid().dim();
  if (axis == n) {
    const double norm = lp_norm(u, p);
    sum += std::pow(norm, p);
    return;
  }
  GridFunction current = u;
  for (int k = 0; k <= order_left; ++k) {
    accumulate_derivatives(current, axis + 1, order_left - k, p, sum);
    if (k < order_left) current = difference(current, axis);
  }
}

}  // namespace

double sobolev_norm(const GridFunction& u, const SobolevParams& params) {
  require_exponent(params.p);
  if (params.r < 0) throw Error(ErrorKind::BadParams, "Sobolev order must be >= 0");
  const DomainGrid& grid = u.grid();
  for (int a = 0; a < grid.dim(); ++a) {
    if (grid.extent(a) < params.r + 1) {
      throw Error(ErrorKind::UnderResolved, "axis " + std::to_string(a) + " has " + std::to_string(grid.extent(a)) +
                                                " cells, order " + std::to_string(params.r) + " needs " +
                                                std::to_string(params.r + 1));
    }
  }
  double sum = 0.0;
  accumulate_derivatives(u, 0, params.r, params.p, sum);
  return std::pow(sum, 1.0 / params.p);
}

CheckResult degenerate_check(const Expression& g, const GridSpec& base, const MorreyParams& params,
                             double ladder_ratio) {
  if (!(params.s < 0.0)) throw Error(ErrorKind::BadParams, "degeneracy check needs s < 0");
  require_exponent(params.p);
  const double factors[] = {2.0, 1.0, 0.5};
  double values[3];
  for (int i = 0; i < 3; ++i) {
    GridSpec spec = base;
    spec.h = base.h * factors[i];
    const GridPtr grid = build_grid(spec);
    const GridFunction sampled = sample(g, grid);
    values[i] = morrey_norm(sampled, params, RadiusLadder::geometric(*grid, ladder_ratio)).value;
  }
  std::map<std::string, double> echo{{"p", params.p},
                                     {"s", params.s},
                                     {"d", base.d},
                                     {"value_2h", values[0]},
                                     {"value_h", values[1]},
                                     {"value_h_half", values[2]}};
  const double required = std::pow(2.0, 0.9 * std::abs(params.s));
  if (values[0] == 0.0 && values[1] == 0.0 && values[2] == 0.0) {
    return make_check("degenerate", ConstantMode::Discrete, 0.0, 0.0, required, std::move(echo),
                      "zero function: no divergence");
  }
  const auto growth = [](double coarse, double fine) {
    return coarse > 0.0 ? fine / coarse : std::numeric_limits<double>::infinity();
  };
  const double g1 = growth(values[0], values[1]);
  const double g2 = growth(values[1], values[2]);
  echo["growth_1"] = g1;
  echo["growth_2"] = g2;
  const double observed = std::min(g1, g2);
  CheckResult r = make_check("degenerate", ConstantMode::Discrete, required, observed, required, std::move(echo));
  r.note = r.pass ? "divergence observed" : "divergence not observed";
  return r;
}

}  // namespace morrey
