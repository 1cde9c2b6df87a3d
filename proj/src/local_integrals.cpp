// SPDX-License-Identifier: Apache-2.0
#include "morrey/local_integrals.hpp"

#include <algorithm>
#include <ostream>

#include "morrey/parallel.hpp"

namespace morrey {

namespace {

constexpr double kRadiusTol = 1e-12;

void require_resolved(double radius, double h) {
  if (!(radius >= 2.0 * h * (1.0 - kRadiusTol))) {
    throw Error(ErrorKind::UnderResolved,
                "radius " + format_double(radius) + " is below 2h=" + format_double(2.0 * h));
  }
}

/// Largest j >= 0 with j² + t2 inside the ball, or -1 if even j = 0 is outside.
Index row_half_width(long long t2, double radius_cells) {
  if (!in_open_ball(t2, radius_cells)) return -1;
  Index j = 0;
  while (in_open_ball(t2 + (j + 1) * (j + 1), radius_cells)) ++j;
  return j;
}

/// Double-double running sums, one column per lattice line along the last axis.
struct LinePrefix {
  Eigen::ArrayXXd hi;
  Eigen::ArrayXXd lo;

  double segment(Index line, Index first, Index last) const {
    const double s = (hi(last + 1, line) - hi(first, line)) + (lo(last + 1, line) - lo(first, line));
    return s > 0.0 ? s : 0.0;
  }
};

LinePrefix build_prefix(const DomainGrid& grid, const Eigen::ArrayXd& dense_source) {
  const Index len = grid.extent(grid.dim() - 1);
  const Index lines = grid.dense_size() / len;
  LinePrefix prefix{Eigen::ArrayXXd::Zero(len + 1, lines), Eigen::ArrayXXd::Zero(len + 1, lines)};
  for (Index line = 0; line < lines; ++line) {
    double hi = 0.0;
    double lo = 0.0;
    for (Index j = 0; j < len; ++j) {
      const double x = dense_source(line * len + j);
      // TwoSum(hi, x), then renormalize.
      const double s = hi + x;
      const double bp = s - hi;
      const double err = (hi - (s - bp)) + (x - bp);
      lo += err;
      hi = s + lo;
      lo = lo - (hi - s);
      prefix.hi(j + 1, line) = hi;
      prefix.lo(j + 1, line) = lo;
    }
  }
  return prefix;
}

/// Sliding-ball masses for every included center. Radii are processed in
/// ascending order and each larger ball adds only its annulus segments, so the
/// result is nondecreasing in ρ without relying on rounding behaviour.
LocalIntegralField accumulate(const GridPtr& grid_ptr, const Eigen::ArrayXd& dense_source, const RadiusLadder& ladder,
                              double exponent) {
  const DomainGrid& grid = *grid_ptr;
  const int n = grid.dim();
  const double h = grid.spacing();
  for (double rho : ladder.radii()) require_resolved(rho, h);

  const BallStencil widest(ladder.max(), h, n);
  const auto& rows = widest.rows();
  const Index nr = ladder.size();
  // half_widths(row, k): along-axis half width of ladder ball k on that row, -1 if absent.
  Eigen::Array<Index, Eigen::Dynamic, Eigen::Dynamic> half_widths(static_cast<Index>(rows.size()), nr);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    long long t2 = 0;
    for (int a = 0; a + 1 < n; ++a) t2 += static_cast<long long>(rows[r].transverse[static_cast<std::size_t>(a)]) *
                                          rows[r].transverse[static_cast<std::size_t>(a)];
    for (Index k = 0; k < nr; ++k) half_widths(static_cast<Index>(r), k) = row_half_width(t2, ladder[k] / h);
  }

  const LinePrefix prefix = build_prefix(grid, dense_source);
  const Index len = grid.extent(n - 1);
  const Index cells = grid.size();
  Eigen::ArrayXXd values(cells, nr);
  const double volume = grid.cell_volume();

  constexpr Index kChunk = 256;
  const Index chunks = (cells + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](long chunk) {
    const Index begin = chunk * kChunk;
    const Index end = std::min(cells, begin + kChunk);
    for (Index c = begin; c < end; ++c) {
      const MultiIndex m = grid.multi_index(grid.dense_index(c));
      const Index along = m[static_cast<std::size_t>(n - 1)];
      double total = 0.0;
      for (Index k = 0; k < nr; ++k) {
        double annulus = 0.0;
        for (std::size_t r = 0; r < rows.size(); ++r) {
          const Index hw = half_widths(static_cast<Index>(r), k);
          const Index prev = k > 0 ? half_widths(static_cast<Index>(r), k - 1) : -1;
          if (hw == prev) continue;
          Index line = 0;
          bool inside = true;
          for (int a = 0; a + 1 < n; ++a) {
            const Index t = m[static_cast<std::size_t>(a)] + rows[r].transverse[static_cast<std::size_t>(a)];
            if (t < 0 || t >= grid.extent(a)) {
              inside = false;
              break;
            }
            line = line * grid.extent(a) + t;
          }
          if (!inside) continue;
          const auto add = [&](Index first, Index last) {
            first = std::max<Index>(first, 0);
            last = std::min<Index>(last, len - 1);
            if (first <= last) annulus += prefix.segment(line, first, last);
          };
          if (prev < 0) {
            add(along - hw, along + hw);
          } else {
            add(along - hw, along - prev - 1);
            add(along + prev + 1, along + hw);
          }
        }
        total += annulus * volume;
        values(c, k) = total;
      }
    }
  });
  return LocalIntegralField(grid_ptr, ladder.radii(), exponent, std::move(values));
}

}  // namespace

RadiusLadder RadiusLadder::geometric(const DomainGrid& grid, double ratio) {
  if (!(ratio > 1.0) || !std::isfinite(ratio)) throw Error(ErrorKind::BadParams, "ladder ratio must exceed 1");
  const double h = grid.spacing();
  const double d = grid.radius_cap();
  require_resolved(d, h);
  std::vector<double> radii;
  for (double rho = 2.0 * h; rho < d * (1.0 - kRadiusTol); rho *= ratio) radii.push_back(rho);
  radii.push_back(d);
  return RadiusLadder(std::move(radii), ratio);
}

RadiusLadder RadiusLadder::from_radii(const DomainGrid& grid, std::vector<double> radii) {
  if (radii.empty()) throw Error(ErrorKind::BadParams, "empty radius ladder");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    require_resolved(radii[i], grid.spacing());
    if (radii[i] > grid.radius_cap() * (1.0 + kRadiusTol)) {
      throw Error(ErrorKind::BadParams, "radius " + format_double(radii[i]) + " exceeds d");
    }
    if (i > 0 && !(radii[i] > radii[i - 1])) throw Error(ErrorKind::BadParams, "ladder radii must increase");
  }
  const double ratio = radii.size() > 1 ? radii[1] / radii[0] : 1.0;
  return RadiusLadder(std::move(radii), ratio);
}

BallStencil::BallStencil(double radius, double h, int n) : radius_(radius), n_(n) {
  if (n < 1 || n > kMaxDim) throw Error(ErrorKind::BadParams, "stencil dimension must be 1, 2 or 3");
  require_resolved(radius, h);
  const double rc = radius / h;
  const Index reach = static_cast<Index>(std::ceil(rc)) + 1;
  const Index span0 = n >= 2 ? reach : 0;
  const Index span1 = n >= 3 ? reach : 0;
  for (Index t0 = -span0; t0 <= span0; ++t0) {
    for (Index t1 = -span1; t1 <= span1; ++t1) {
      const long long t2 = static_cast<long long>(t0) * t0 + static_cast<long long>(t1) * t1;
      const Index hw = row_half_width(t2, rc);
      if (hw >= 0) rows_.push_back(Row{{t0, t1}, hw});
    }
  }
}

Index BallStencil::cell_count() const {
  Index count = 0;
  for (const Row& r : rows_) count += 2 * r.half_width + 1;
  return count;
}

std::vector<MultiIndex> BallStencil::offsets() const {
  std::vector<MultiIndex> out;
  for (const Row& r : rows_) {
    for (Index j = -r.half_width; j <= r.half_width; ++j) {
      MultiIndex z{0, 0, 0};
      for (int a = 0; a + 1 < n_; ++a) z[static_cast<std::size_t>(a)] = r.transverse[static_cast<std::size_t>(a)];
      z[static_cast<std::size_t>(n_ - 1)] = j;
      out.push_back(z);
    }
  }
  return out;
}

BallStencil ball_stencil(double radius, double h, int n) { return BallStencil(radius, h, n); }

LocalIntegralField ppower_field(const GridFunction& g, double p, const RadiusLadder& ladder) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorKind::BadParams, "exponent p must be >= 1");
  const DomainGrid& grid = g.grid();
  Eigen::ArrayXd source = Eigen::ArrayXd::Zero(grid.dense_size());
  for (Index c = 0; c < grid.size(); ++c) source(grid.dense_index(c)) = ppower(g[c], p);
  return accumulate(g.grid_ptr(), source, ladder, p);
}

LocalIntegralField ppower_field_bruteforce(const GridFunction& g, double p, const RadiusLadder& ladder) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorKind::BadParams, "exponent p must be >= 1");
  const DomainGrid& grid = g.grid();
  const int n = grid.dim();
  const double h = grid.spacing();
  for (double rho : ladder.radii()) require_resolved(rho, h);
  const Index cells = grid.size();
  std::vector<MultiIndex> where(static_cast<std::size_t>(cells));
  Eigen::ArrayXd powered(cells);
  for (Index c = 0; c < cells; ++c) {
    where[static_cast<std::size_t>(c)] = grid.multi_index(grid.dense_index(c));
    powered(c) = ppower(g[c], p);
  }
  Eigen::ArrayXXd values(cells, ladder.size());
  for (Index k = 0; k < ladder.size(); ++k) {
    const double rc = ladder[k] / h;
    for (Index x = 0; x < cells; ++x) {
      double sum = 0.0;
      for (Index c = 0; c < cells; ++c) {
        long long norm2 = 0;
        for (int a = 0; a < n; ++a) {
          const long long diff = where[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)] -
                                 where[static_cast<std::size_t>(x)][static_cast<std::size_t>(a)];
          norm2 += diff * diff;
        }
        if (in_open_ball(norm2, rc)) sum += powered(c);
      }
      values(x, k) = sum * grid.cell_volume();
    }
  }
  return LocalIntegralField(g.grid_ptr(), ladder.radii(), p, std::move(values));
}

LocalIntegralField ball_measure_field(const GridPtr& grid, const RadiusLadder& ladder) {
  Eigen::ArrayXd source = Eigen::ArrayXd::Zero(grid->dense_size());
  for (Index c = 0; c < grid->size(); ++c) source(grid->dense_index(c)) = 1.0;
  return accumulate(grid, source, ladder, 1.0);
}

LocalIntegralField ball_measure_field(const Mask& e, const RadiusLadder& ladder) {
  const DomainGrid& grid = e.grid();
  Eigen::ArrayXd source = Eigen::ArrayXd::Zero(grid.dense_size());
  for (Index c = 0; c < grid.size(); ++c) source(grid.dense_index(c)) = e[c] ? 1.0 : 0.0;
  return accumulate(e.grid_ptr(), source, ladder, 1.0);
}

void write_field_csv(std::ostream& os, const LocalIntegralField& field) {
  const DomainGrid& grid = field.grid();
  for (int a = 0; a < grid.dim(); ++a) os << 'x' << (a + 1) << ',';
  os << "rho,value\n";
  for (Index k = 0; k < static_cast<Index>(field.radii().size()); ++k) {
    for (Index c = 0; c < grid.size(); ++c) {
      const Coord x = grid.center(c);
      for (int a = 0; a < grid.dim(); ++a) os << format_double(x(a)) << ',';
      os << format_double(field.radii()[static_cast<std::size_t>(k)]) << ',' << format_double(field(c, k)) << '\n';
    }
  }
}

}  // namespace morrey
