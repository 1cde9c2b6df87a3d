// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "morrey/expr.hpp"
#include "morrey/grid.hpp"

namespace morrey {

/// mt19937_64 with a portable mapping to [0, 1): std::uniform_real_distribution
/// is implementation-defined, so corpora would not be bit-identical across stdlibs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

enum class CorpusFamily { BoundedRandom, RadialDecay, CompactBump };

CorpusFamily parse_family(const std::string& name);
const char* to_string(CorpusFamily family);

struct CorpusGeometry {
  int n = 1;
  Box box;
  double d = 1.0;
  double p = 1.0;
};

struct CorpusEntry {
  Expression expr;
  std::map<std::string, double> params;
};

struct Corpus {
  std::uint64_t seed = 0;
  CorpusFamily family = CorpusFamily::BoundedRandom;
  std::vector<CorpusEntry> entries;
};

/// Deterministic expression list.
///   bounded-random: constant + Gaussian bump + saturating kink.
///   radial-decay:   1/(1 + r^α), α_j = (j+1)/count · 2n/p.
///   compact-bump:   a·max(0, 1 - |x-c|²/w²)², support at least d inside the box.
Corpus build_corpus(std::uint64_t seed, int count, CorpusFamily family, const CorpusGeometry& geometry);

/// Independent uniform values in [-amplitude, amplitude] per included cell.
GridFunction random_function(const GridPtr& grid, std::uint64_t seed, double amplitude = 1.0);

/// Each cell flagged with probability `density`.
Mask random_mask(const GridPtr& grid, std::uint64_t seed, double density = 0.5);

/// Dense flags for a random domain mask: cells kept with probability `keep`,
/// with at least one cell kept.
std::vector<bool> random_domain_flags(Index dense_size, std::uint64_t seed, double keep = 0.8);

}  // namespace morrey
