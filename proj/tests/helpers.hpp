#pragma once

#include <cmath>

#include "morrey/corpus.hpp"
#include "morrey/expr.hpp"
#include "morrey/grid.hpp"

namespace morrey::test {

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline GridPtr line(double lo, double hi, double h, double d, MaskSpec mask = {}) {
  return build_grid(1, make_box({lo, hi}), h, d, std::move(mask));
}

inline GridPtr square(double lo, double hi, double h, double d, MaskSpec mask = {}) {
  return build_grid(2, make_box({lo, hi, lo, hi}), h, d, std::move(mask));
}

inline GridFunction sample(const char* src, const GridPtr& grid) { return morrey::sample(parse(src), grid); }

}  // namespace morrey::test
