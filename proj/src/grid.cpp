// SPDX-License-Identifier: Apache-2.0
#include "morrey/grid.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "morrey/expr.hpp"

namespace morrey {

namespace {

constexpr double kGeometryTol = 1e-9;

Index checked_extent(double length, double h, int axis) {
  if (!(length > 0.0)) {
    throw Error(ErrorKind::BadGeometry, "box axis " + std::to_string(axis) + " has non-positive length");
  }
  const double cells = length / h;
  const double rounded = std::round(cells);
  if (rounded < 1.0 || std::abs(cells - rounded) > kGeometryTol * std::max(1.0, cells)) {
    throw Error(ErrorKind::BadGeometry, "box side " + format_double(length) + " on axis " + std::to_string(axis) +
                                            " is not a positive integer multiple of h=" + format_double(h));
  }
  return static_cast<Index>(rounded);
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

DomainGrid::DomainGrid(const GridSpec& spec) : n_(spec.n), box_(spec.box), h_(spec.h), d_(spec.d) {
  if (n_ < 1 || n_ > kMaxDim) throw Error(ErrorKind::BadGeometry, "dimension must be 1, 2 or 3");
  if (box_.lower.size() != n_ || box_.upper.size() != n_) {
    throw Error(ErrorKind::BadGeometry, "box needs lower/upper bounds for each of the " + std::to_string(n_) + " axes");
  }
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw Error(ErrorKind::BadGeometry, "h must be positive and finite");
  if (!std::isfinite(d_) || d_ < 2.0 * h_ * (1.0 - 1e-12)) {
    throw Error(ErrorKind::UnderResolved, "d=" + format_double(d_) + " is below 2h=" + format_double(2.0 * h_));
  }
  Index total = 1;
  for (int a = 0; a < n_; ++a) {
    extent_[static_cast<std::size_t>(a)] = checked_extent(box_.upper(a) - box_.lower(a), h_, a);
    total *= extent_[static_cast<std::size_t>(a)];
  }
  cell_volume_ = std::pow(h_, n_);

  included_dense_.assign(static_cast<std::size_t>(total), true);
  if (const auto* flags = std::get_if<std::vector<bool>>(&spec.mask)) {
    if (static_cast<Index>(flags->size()) != total) {
      throw Error(ErrorKind::BadGeometry, "dense mask has " + std::to_string(flags->size()) + " flags, box has " +
                                              std::to_string(total) + " cells");
    }
    included_dense_ = *flags;
  } else if (const auto* pred = std::get_if<std::function<bool(const Coord&)>>(&spec.mask)) {
    for (Index i = 0; i < total; ++i) included_dense_[static_cast<std::size_t>(i)] = (*pred)(dense_center(i));
  }

  dense_to_compact_.assign(static_cast<std::size_t>(total), -1);
  for (Index i = 0; i < total; ++i) {
    if (included_dense_[static_cast<std::size_t>(i)]) {
      dense_to_compact_[static_cast<std::size_t>(i)] = static_cast<Index>(compact_to_dense_.size());
      compact_to_dense_.push_back(i);
    }
  }
  if (compact_to_dense_.empty()) throw Error(ErrorKind::EmptyDomain, "mask excludes every cell");
}

MultiIndex DomainGrid::multi_index(Index dense) const {
  MultiIndex m{0, 0, 0};
  for (int a = n_ - 1; a >= 0; --a) {
    const Index e = extent_[static_cast<std::size_t>(a)];
    m[static_cast<std::size_t>(a)] = dense % e;
    dense /= e;
  }
  return m;
}

Index DomainGrid::dense_from_multi(const MultiIndex& m) const {
  Index dense = 0;
  for (int a = 0; a < n_; ++a) dense = dense * extent_[static_cast<std::size_t>(a)] + m[static_cast<std::size_t>(a)];
  return dense;
}

bool DomainGrid::in_box(const MultiIndex& m) const {
  for (int a = 0; a < n_; ++a) {
    if (m[static_cast<std::size_t>(a)] < 0 || m[static_cast<std::size_t>(a)] >= extent_[static_cast<std::size_t>(a)]) {
      return false;
    }
  }
  return true;
}

Coord DomainGrid::dense_center(Index dense) const {
  const MultiIndex m = multi_index(dense);
  Coord c(n_);
  for (int a = 0; a < n_; ++a) c(a) = box_.lower(a) + (static_cast<double>(m[static_cast<std::size_t>(a)]) + 0.5) * h_;
  return c;
}

bool DomainGrid::operator==(const DomainGrid& other) const {
  return n_ == other.n_ && h_ == other.h_ && d_ == other.d_ && box_.lower == other.box_.lower &&
         box_.upper == other.box_.upper && included_dense_ == other.included_dense_;
}

GridPtr build_grid(const GridSpec& spec) { return std::make_shared<const DomainGrid>(spec); }

GridPtr build_grid(int n, const Box& box, double h, double d, MaskSpec mask) {
  return build_grid(GridSpec{n, box, h, d, std::move(mask)});
}

Box make_box(const std::vector<double>& bounds) {
  if (bounds.empty() || bounds.size() % 2 != 0 || bounds.size() > 2 * kMaxDim) {
    throw Error(ErrorKind::BadGeometry, "box needs lo,hi pairs for 1 to 3 axes");
  }
  const Index n = static_cast<Index>(bounds.size() / 2);
  Box box{Coord(n), Coord(n)};
  for (Index a = 0; a < n; ++a) {
    box.lower(a) = bounds[static_cast<std::size_t>(2 * a)];
    box.upper(a) = bounds[static_cast<std::size_t>(2 * a + 1)];
  }
  return box;
}

GridPtr with_mask(const GridPtr& grid, const MaskSpec& mask) {
  return build_grid(GridSpec{grid->dim(), grid->box(), grid->spacing(), grid->radius_cap(), mask});
}

GridFunction::GridFunction(GridPtr grid, Eigen::ArrayXd values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw Error(ErrorKind::BadParams, "grid function without grid");
  if (values_.size() != grid_->size()) {
    throw Error(ErrorKind::BadParams, "grid function has " + std::to_string(values_.size()) + " values for " +
                                          std::to_string(grid_->size()) + " included cells");
  }
  for (Index i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_(i))) {
      throw Error(ErrorKind::NonFiniteSample, "non-finite value at cell " + std::to_string(i));
    }
  }
}

GridFunction GridFunction::zeros(GridPtr grid) { return constant(std::move(grid), 0.0); }

GridFunction GridFunction::constant(GridPtr grid, double value) {
  const Index size = grid->size();
  return GridFunction(std::move(grid), Eigen::ArrayXd::Constant(size, value));
}

double GridFunction::abs_max() const { return values_.size() == 0 ? 0.0 : values_.abs().maxCoeff(); }

Mask::Mask(GridPtr grid, BoolArray flags) : grid_(std::move(grid)), flags_(std::move(flags)) {
  if (flags_.size() != grid_->size()) throw Error(ErrorKind::BadParams, "mask size does not match grid");
}

Mask Mask::none(GridPtr grid) {
  const Index size = grid->size();
  return Mask(std::move(grid), BoolArray::Constant(size, false));
}

Mask Mask::all(GridPtr grid) {
  const Index size = grid->size();
  return Mask(std::move(grid), BoolArray::Constant(size, true));
}

void require_same_grid(const DomainGrid& a, const DomainGrid& b) {
  if (&a != &b && !(a == b)) throw Error(ErrorKind::BadParams, "operands live on different grids");
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a.grid(), b.grid());
  return GridFunction(a.grid_ptr(), a.values() + b.values());
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a.grid(), b.grid());
  return GridFunction(a.grid_ptr(), a.values() - b.values());
}

GridFunction operator*(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a.grid(), b.grid());
  return GridFunction(a.grid_ptr(), a.values() * b.values());
}

GridFunction operator*(double c, const GridFunction& g) { return GridFunction(g.grid_ptr(), c * g.values()); }

GridFunction restrict_to(const GridFunction& g, const Mask& e) {
  require_same_grid(g.grid(), e.grid());
  return GridFunction(g.grid_ptr(), e.flags().select(g.values(), 0.0));
}

Mask operator|(const Mask& a, const Mask& b) {
  require_same_grid(a.grid(), b.grid());
  return Mask(a.grid_ptr(), a.flags() || b.flags());
}

Mask operator&(const Mask& a, const Mask& b) {
  require_same_grid(a.grid(), b.grid());
  return Mask(a.grid_ptr(), a.flags() && b.flags());
}

GridFunction restrict_to_grid(const GridFunction& g, const GridPtr& subgrid) {
  const DomainGrid& src = g.grid();
  const DomainGrid& dst = *subgrid;
  if (src.dim() != dst.dim() || src.spacing() != dst.spacing() || src.dense_size() != dst.dense_size() ||
      src.box().lower != dst.box().lower || src.box().upper != dst.box().upper) {
    throw Error(ErrorKind::BadParams, "restriction target has a different lattice");
  }
  Eigen::ArrayXd values(dst.size());
  for (Index c = 0; c < dst.size(); ++c) {
    const Index from = src.compact_index(dst.dense_index(c));
    if (from < 0) throw Error(ErrorKind::BadParams, "restriction target mask is not a subset");
    values(c) = g[from];
  }
  return GridFunction(subgrid, std::move(values));
}

double unit_ball_volume(int n) {
  if (n < 1) throw Error(ErrorKind::BadParams, "unit ball volume needs n >= 1");
  const double half = 0.5 * n;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

GridFunction sample(const Expression& e, const GridPtr& grid) {
  if (e.arity() > grid->dim()) {
    throw Error(ErrorKind::BadParams, "expression uses x" + std::to_string(e.arity()) + " on a " +
                                          std::to_string(grid->dim()) + "-dimensional grid");
  }
  Eigen::ArrayXd values(grid->size());
  for (Index c = 0; c < grid->size(); ++c) {
    const Coord x = grid->center(c);
    const double v = e.eval(x);
    if (!std::isfinite(v)) {
      std::string where;
      for (Index a = 0; a < x.size(); ++a) where += (a ? "," : "") + format_double(x(a));
      throw Error(ErrorKind::NonFiniteSample,
                  "'" + e.to_string() + "' is not finite at cell " + std::to_string(c) + " (" + where + ")");
    }
    values(c) = v;
  }
  return GridFunction(grid, std::move(values));
}

void write_dump(std::ostream& os, const GridFunction& g) {
  const DomainGrid& grid = g.grid();
  os << "MGRID v1 " << grid.dim() << ' ' << format_double(grid.spacing()) << ' ' << format_double(grid.radius_cap());
  for (int a = 0; a < grid.dim(); ++a) {
    os << ' ' << format_double(grid.box().lower(a)) << ' ' << format_double(grid.box().upper(a));
  }
  os << ' ' << grid.dense_size() << '\n';
  for (Index i = 0; i < grid.dense_size(); ++i) {
    const Index c = grid.compact_index(i);
    if (c < 0) {
      os << "-\n";
    } else {
      os << format_double(g[c]) << '\n';
    }
  }
}

namespace {

struct DumpContents {
  GridPtr grid;
  Eigen::ArrayXd values;
};

double parse_number(const std::string& token, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (...) {
    used = 0;
  }
  if (used == 0 || used != token.size()) throw Error(ErrorKind::Io, std::string("bad ") + what + " '" + token + "'");
  return v;
}

DumpContents read_dump_contents(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorKind::Io, "empty grid dump");
  std::istringstream header(line);
  std::string magic, version;
  header >> magic >> version;
  if (magic != "MGRID" || version != "v1") throw Error(ErrorKind::Io, "not an MGRID v1 dump");
  std::string tok;
  std::vector<std::string> tokens;
  while (header >> tok) tokens.push_back(tok);
  if (tokens.size() < 6) throw Error(ErrorKind::Io, "truncated MGRID header");
  const int n = static_cast<int>(parse_number(tokens[0], "dimension"));
  if (n < 1 || n > kMaxDim || tokens.size() != static_cast<std::size_t>(4 + 2 * n)) {
    throw Error(ErrorKind::Io, "MGRID header has wrong field count for its dimension");
  }
  const double h = parse_number(tokens[1], "spacing");
  const double d = parse_number(tokens[2], "radius cap");
  std::vector<double> bounds;
  for (int k = 0; k < 2 * n; ++k) bounds.push_back(parse_number(tokens[static_cast<std::size_t>(3 + k)], "bound"));
  const auto count = static_cast<std::size_t>(parse_number(tokens.back(), "count"));

  std::vector<bool> flags;
  std::vector<double> values;
  flags.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(is, line)) throw Error(ErrorKind::Io, "MGRID dump ends after " + std::to_string(i) + " values");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "-") {
      flags.push_back(false);
    } else {
      flags.push_back(true);
      values.push_back(parse_number(line, "value"));
    }
  }
  GridPtr grid = build_grid(n, make_box(bounds), h, d, flags);
  if (grid->dense_size() != static_cast<Index>(count)) throw Error(ErrorKind::Io, "MGRID count does not match box");
  return {grid, Eigen::Map<const Eigen::ArrayXd>(values.data(), static_cast<Index>(values.size()))};
}

}  // namespace

GridFunction read_dump(std::istream& is) {
  DumpContents contents = read_dump_contents(is);
  return GridFunction(contents.grid, std::move(contents.values));
}

GridPtr read_grid_dump(std::istream& is) { return read_dump_contents(is).grid; }

}  // namespace morrey
