// SPDX-License-Identifier: Apache-2.0
#include "morrey/approx.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace morrey {

double Curve::at(double x) const {
  if (t.size() == 0 || x <= 0.0) return 0.0;
  if (x >= t(t.size() - 1)) return value(t.size() - 1);
  double t0 = 0.0;
  double v0 = 0.0;
  for (Index i = 0; i < t.size(); ++i) {
    if (x <= t(i)) return v0 + (value(i) - v0) * (x - t0) / (t(i) - t0);
    t0 = t(i);
    v0 = value(i);
  }
  return v0;
}

Mask superlevel_mask(const GridFunction& g, double level) {
  if (!(level >= 0.0)) throw Error(ErrorKind::BadParams, "superlevel needs r >= 0");
  return Mask(g.grid_ptr(), g.values().abs() >= level);
}

GridFunction truncate(const GridFunction& g, double level) {
  if (!(level >= 0.0)) throw Error(ErrorKind::BadParams, "truncation needs r >= 0");
  return GridFunction(g.grid_ptr(), (g.values().abs() >= level).select(0.0, g.values()));
}

double local_density(const Mask& e, const RadiusLadder& ladder) {
  if (e.count() == 0) return 0.0;
  const LocalIntegralField field = ball_measure_field(e, ladder);
  const int n = e.grid().dim();
  double best = 0.0;
  for (Index k = 0; k < ladder.size(); ++k) {
    const double scale = std::pow(ladder[k], -n);
    best = std::max(best, scale * field.values().col(k).maxCoeff());
  }
  return best;
}

namespace {

Mask ball_mask(const GridPtr& grid, Index center, double radius) {
  const Index n = grid->dim();
  const double rc = radius / grid->spacing();
  const MultiIndex m0 = grid->multi_index(grid->dense_index(center));
  BoolArray flags(grid->size());
  for (Index c = 0; c < grid->size(); ++c) {
    const MultiIndex m = grid->multi_index(grid->dense_index(c));
    long long norm2 = 0;
    for (Index a = 0; a < n; ++a) {
      const long long diff = m[static_cast<std::size_t>(a)] - m0[static_cast<std::size_t>(a)];
      norm2 += diff * diff;
    }
    flags(c) = in_open_ball(norm2, rc);
  }
  return Mask(grid, std::move(flags));
}

}  // namespace

std::vector<SigmaCandidate> sigma_candidates(const GridFunction& g, const MorreyParams& params,
                                             const RadiusLadder& ladder, const SigmaOptions& options) {
  std::vector<SigmaCandidate> out;
  const auto add = [&](Mask set, std::string label) {
    SigmaCandidate cand{std::move(set), 0.0, 0.0, std::move(label)};
    cand.density = local_density(cand.set, ladder);
    cand.norm = cand.set.count() == 0 ? 0.0 : morrey_norm(restrict_to(g, cand.set), params, ladder).value;
    out.push_back(std::move(cand));
  };

  std::vector<double> levels(g.values().abs().begin(), g.values().abs().end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::vector<double> picked;
  if (static_cast<int>(levels.size()) <= options.max_levels || options.max_levels < 2) {
    picked = levels;
  } else {
    const auto last = static_cast<double>(levels.size() - 1);
    for (int i = 0; i < options.max_levels; ++i) {
      const auto idx = static_cast<std::size_t>(std::llround(i * last / (options.max_levels - 1)));
      if (picked.empty() || picked.back() != levels[idx]) picked.push_back(levels[idx]);
    }
  }
  for (double level : picked) add(superlevel_mask(g, level), "superlevel:" + format_double(level));

  std::vector<Index> order(static_cast<std::size_t>(g.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return std::abs(g[a]) > std::abs(g[b]); });
  const auto centers = std::min<std::size_t>(order.size(), static_cast<std::size_t>(std::max(0, options.ball_centers)));
  for (std::size_t i = 0; i < centers; ++i) {
    for (double rho : ladder.radii()) {
      add(ball_mask(g.grid_ptr(), order[i], rho),
          "ball:" + std::to_string(order[i]) + ":" + format_double(rho));
    }
  }
  return out;
}

double density_cap(const GridPtr& grid, const RadiusLadder& ladder) {
  return std::max(unit_ball_volume(grid->dim()), local_density(Mask::all(grid), ladder));
}

Eigen::ArrayXd default_t_ladder(int n, int count) { return geometric_t_ladder(unit_ball_volume(n), count); }

Eigen::ArrayXd default_t_ladder(const GridPtr& grid, const RadiusLadder& ladder, int count) {
  return geometric_t_ladder(density_cap(grid, ladder), count);
}

Eigen::ArrayXd geometric_t_ladder(double top, int count) {
  if (count < 2) throw Error(ErrorKind::BadParams, "t ladder needs at least two points");
  Eigen::ArrayXd t(count);
  for (int i = 0; i < count; ++i) t(i) = top * std::pow(2.0, -10.0 * (count - 1 - i) / (count - 1));
  return t;
}

namespace {

void require_t_ladder(const Eigen::ArrayXd& t_ladder, double top) {
  for (Index i = 0; i < t_ladder.size(); ++i) {
    if (!(t_ladder(i) > 0.0) || t_ladder(i) > top * (1.0 + 1e-12)) {
      throw Error(ErrorKind::BadParams, "t values must lie in (0, " + format_double(top) + "]");
    }
    if (i > 0 && !(t_ladder(i) > t_ladder(i - 1))) throw Error(ErrorKind::BadParams, "t values must increase");
  }
}

}  // namespace

Curve sigma_estimate(const std::vector<SigmaCandidate>& candidates, const Eigen::ArrayXd& t_ladder) {
  Curve curve{t_ladder, Eigen::ArrayXd::Zero(t_ladder.size())};
  for (Index i = 0; i < t_ladder.size(); ++i) {
    double best = 0.0;
    for (const SigmaCandidate& c : candidates) {
      if (c.density <= t_ladder(i)) best = std::max(best, c.norm);
    }
    curve.value(i) = best;
  }
  return curve;
}

Curve sigma_estimate(const GridFunction& g, const MorreyParams& params, const RadiusLadder& ladder,
                     const Eigen::ArrayXd& t_ladder, const SigmaOptions& options) {
  require_t_ladder(t_ladder, density_cap(g.grid_ptr(), ladder));
  return sigma_estimate(sigma_candidates(g, params, ladder, options), t_ladder);
}

Curve dominating_envelope(const Curve& sigma) {
  const Index count = sigma.t.size();
  std::vector<double> xs{0.0};
  std::vector<double> ys{0.0};
  double running = 0.0;
  for (Index i = 0; i < count; ++i) {
    running = std::max(running, sigma.value(i));
    xs.push_back(sigma.t(i));
    ys.push_back(running);
  }
  // Upper hull, left to right.
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2];
      const std::size_t b = hull.back();
      const double cross = (xs[b] - xs[a]) * (ys[i] - ys[a]) - (ys[b] - ys[a]) * (xs[i] - xs[a]);
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(i);
  }
  Curve out{sigma.t, Eigen::ArrayXd::Zero(count)};
  std::size_t seg = 0;
  for (Index i = 0; i < count; ++i) {
    const double x = sigma.t(i);
    while (seg + 1 < hull.size() && xs[hull[seg + 1]] < x) ++seg;
    double v = ys[hull[seg]];
    if (seg + 1 < hull.size()) {
      const std::size_t a = hull[seg];
      const std::size_t b = hull[seg + 1];
      v = ys[a] + (ys[b] - ys[a]) * (x - xs[a]) / (xs[b] - xs[a]);
    }
    out.value(i) = std::max(v, ys[static_cast<std::size_t>(i + 1)]);
    if (i > 0) out.value(i) = std::max(out.value(i), out.value(i - 1));
  }
  return out;
}

Curve modulus_of_continuity(const GridFunction& g, const MorreyParams& params, const RadiusLadder& ladder,
                            const Eigen::ArrayXd& t_ladder, const SigmaOptions& options) {
  return dominating_envelope(sigma_estimate(g, params, ladder, t_ladder, options));
}

ThresholdResult r_of_k(const GridFunction& g, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw Error(ErrorKind::BadParams, "k must be positive and finite");
  const GridPtr& grid = g.grid_ptr();
  const RadiusLadder at_d = RadiusLadder::from_radii(*grid, {grid->radius_cap()});
  const double top = g.abs_max();
  const double eta = 1e-12 * (1.0 + top);

  std::vector<double> candidates(g.values().abs().begin(), g.values().abs().end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (double& c : candidates) c += eta;
  candidates.push_back(top + eta);

  const auto measure = [&](double level) {
    const Mask e = superlevel_mask(g, level);
    if (e.count() == 0) return 0.0;
    return ball_measure_field(e, at_d).values().maxCoeff();
  };
  const double bound = 1.0 / k;
  // Superlevel sets shrink as the level grows, so feasibility is monotone.
  std::size_t lo = 0;
  std::size_t hi = candidates.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (measure(candidates[mid]) <= bound) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  if (lo == candidates.size()) throw Error(ErrorKind::Infeasible, "no threshold meets the density bound 1/k");
  return ThresholdResult{k, candidates[lo], measure(candidates[lo])};
}

Mask interior_mask(const GridPtr& grid, int width) {
  if (width < 0) throw Error(ErrorKind::BadParams, "width must be >= 0");
  const int n = grid->dim();
  BoolArray flags(grid->size());
  for (Index c = 0; c < grid->size(); ++c) {
    const MultiIndex m = grid->multi_index(grid->dense_index(c));
    bool keep = true;
    MultiIndex z{-width, n >= 2 ? -width : 0, n >= 3 ? -width : 0};
    const MultiIndex stop{width, n >= 2 ? width : 0, n >= 3 ? width : 0};
    for (z[0] = -width; keep && z[0] <= stop[0]; ++z[0]) {
      for (z[1] = -stop[1]; keep && z[1] <= stop[1]; ++z[1]) {
        for (z[2] = -stop[2]; keep && z[2] <= stop[2]; ++z[2]) {
          const MultiIndex q{m[0] + z[0], m[1] + z[1], m[2] + z[2]};
          keep = grid->in_box(q) && grid->included_dense(grid->dense_from_multi(q));
        }
      }
    }
    flags(c) = keep;
  }
  return Mask(grid, std::move(flags));
}

Mask dilate(const Mask& e, int width) {
  if (width < 0) throw Error(ErrorKind::BadParams, "width must be >= 0");
  const DomainGrid& grid = e.grid();
  const int n = grid.dim();
  const Index w = width;
  const MultiIndex stop{w, n >= 2 ? w : 0, n >= 3 ? w : 0};
  BoolArray flags = BoolArray::Constant(grid.size(), false);
  for (Index c = 0; c < grid.size(); ++c) {
    if (!e[c]) continue;
    const MultiIndex m = grid.multi_index(grid.dense_index(c));
    for (Index z0 = -stop[0]; z0 <= stop[0]; ++z0) {
      for (Index z1 = -stop[1]; z1 <= stop[1]; ++z1) {
        for (Index z2 = -stop[2]; z2 <= stop[2]; ++z2) {
          if (z0 * z0 + z1 * z1 + z2 * z2 > w * w) continue;
          const MultiIndex q{m[0] + z0, m[1] + z1, m[2] + z2};
          if (!grid.in_box(q)) continue;
          const Index target = grid.compact_index(grid.dense_from_multi(q));
          if (target >= 0) flags(target) = true;
        }
      }
    }
  }
  return Mask(e.grid_ptr(), std::move(flags));
}

GridFunction mollified_truncation(const GridFunction& g, double level, int width) {
  if (width < 1) throw Error(ErrorKind::BadParams, "smoothing width must be >= 1");
  const GridPtr& grid = g.grid_ptr();
  const Mask keep = interior_mask(grid, width);
  if (keep.count() == 0) {
    throw Error(ErrorKind::UnderResolved, "no cell lies more than " + std::to_string(width) +
                                              " cells inside the domain boundary");
  }
  const int n = grid->dim();
  Eigen::ArrayXd current = restrict_to(truncate(g, level), keep).values();
  const double divisor = std::pow(3.0, n);
  const MultiIndex stop{1, n >= 2 ? 1 : 0, n >= 3 ? 1 : 0};
  for (int pass = 0; pass < width; ++pass) {
    Eigen::ArrayXd next = Eigen::ArrayXd::Zero(current.size());
    for (Index c = 0; c < grid->size(); ++c) {
      if (!keep[c]) continue;
      const MultiIndex m = grid->multi_index(grid->dense_index(c));
      double sum = 0.0;
      for (Index z0 = -stop[0]; z0 <= stop[0]; ++z0) {
        for (Index z1 = -stop[1]; z1 <= stop[1]; ++z1) {
          for (Index z2 = -stop[2]; z2 <= stop[2]; ++z2) {
            const MultiIndex q{m[0] + z0, m[1] + z1, m[2] + z2};
            // keep[c] guarantees the whole 3^n neighbourhood is inside Ω.
            sum += current(grid->compact_index(grid->dense_from_multi(q)));
          }
        }
      }
      next(c) = sum / divisor;
    }
    current = std::move(next);
  }
  return GridFunction(grid, std::move(current));
}

}  // namespace morrey
