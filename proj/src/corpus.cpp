// SPDX-License-Identifier: Apache-2.0
#include "morrey/corpus.hpp"

#include <algorithm>

namespace morrey {

CorpusFamily parse_family(const std::string& name) {
  if (name == "bounded-random") return CorpusFamily::BoundedRandom;
  if (name == "radial-decay") return CorpusFamily::RadialDecay;
  if (name == "compact-bump") return CorpusFamily::CompactBump;
  throw Error(ErrorKind::BadParams, "unknown corpus family '" + name + "'");
}

const char* to_string(CorpusFamily family) {
  switch (family) {
    case CorpusFamily::BoundedRandom: return "bounded-random";
    case CorpusFamily::RadialDecay: return "radial-decay";
    case CorpusFamily::CompactBump: return "compact-bump";
  }
  return "unknown";
}

namespace {

std::string num(double x) { return "(" + format_double(x) + ")"; }

/// "(x1 - c1)^2 + (x2 - c2)^2 + ..."
std::string squared_distance(const std::vector<double>& center) {
  std::string out;
  for (std::size_t a = 0; a < center.size(); ++a) {
    if (a) out += " + ";
    out += "(x" + std::to_string(a + 1) + " - " + num(center[a]) + ")^2";
  }
  return out;
}

}  // namespace

Corpus build_corpus(std::uint64_t seed, int count, CorpusFamily family, const CorpusGeometry& geometry) {
  if (count < 1) throw Error(ErrorKind::BadParams, "corpus count must be >= 1");
  if (geometry.box.lower.size() != geometry.n || geometry.box.upper.size() != geometry.n) {
    throw Error(ErrorKind::BadGeometry, "corpus box does not match n");
  }
  Rng rng(seed);
  Corpus corpus{seed, family, {}};
  const int n = geometry.n;
  for (int j = 0; j < count; ++j) {
    std::string src;
    std::map<std::string, double> params;
    switch (family) {
      case CorpusFamily::BoundedRandom: {
        std::vector<double> center(static_cast<std::size_t>(n));
        for (int a = 0; a < n; ++a) {
          center[static_cast<std::size_t>(a)] = rng.uniform(geometry.box.lower(a), geometry.box.upper(a));
        }
        const double base = rng.uniform(-1.0, 1.0);
        const double amp = rng.uniform(-2.0, 2.0);
        const double width = rng.uniform(0.5, 4.0);
        const double kink_amp = rng.uniform(-1.0, 1.0);
        const double kink_at = rng.uniform(geometry.box.lower(0), geometry.box.upper(0));
        src = num(base) + " + " + num(amp) + " * exp(-" + num(width) + " * (" + squared_distance(center) + ")) + " +
              num(kink_amp) + " * abs(x1 - " + num(kink_at) + ") / (1 + abs(x1 - " + num(kink_at) + "))";
        params = {{"base", base}, {"amp", amp}, {"width", width}, {"kink_amp", kink_amp}, {"kink_at", kink_at}};
        break;
      }
      case CorpusFamily::RadialDecay: {
        const double alpha = (j + 1.0) / count * 2.0 * n / geometry.p;
        src = "1 / (1 + r^" + num(alpha) + ")";
        params = {{"alpha", alpha}};
        break;
      }
      case CorpusFamily::CompactBump: {
        double room = std::numeric_limits<double>::infinity();
        for (int a = 0; a < n; ++a) {
          room = std::min(room, 0.5 * (geometry.box.upper(a) - geometry.box.lower(a)) - geometry.d);
        }
        if (!(room > 0.0)) throw Error(ErrorKind::BadGeometry, "box leaves no room for bumps inside the d-collar");
        const double w = rng.uniform(0.3, 0.9) * room;
        std::vector<double> center(static_cast<std::size_t>(n));
        for (int a = 0; a < n; ++a) {
          center[static_cast<std::size_t>(a)] =
              rng.uniform(geometry.box.lower(a) + geometry.d + w, geometry.box.upper(a) - geometry.d - w);
        }
        const double amp = rng.uniform(0.5, 2.0);
        src = num(amp) + " * max(0, 1 - (" + squared_distance(center) + ") / " + num(w * w) + ")^2";
        params = {{"amp", amp}, {"radius", w}};
        for (int a = 0; a < n; ++a) params["c" + std::to_string(a + 1)] = center[static_cast<std::size_t>(a)];
        break;
      }
    }
    corpus.entries.push_back(CorpusEntry{parse(src), std::move(params)});
  }
  return corpus;
}

GridFunction random_function(const GridPtr& grid, std::uint64_t seed, double amplitude) {
  Rng rng(seed);
  Eigen::ArrayXd values(grid->size());
  for (Index c = 0; c < values.size(); ++c) values(c) = rng.uniform(-amplitude, amplitude);
  return GridFunction(grid, std::move(values));
}

Mask random_mask(const GridPtr& grid, std::uint64_t seed, double density) {
  Rng rng(seed);
  BoolArray flags(grid->size());
  for (Index c = 0; c < flags.size(); ++c) flags(c) = rng.uniform() < density;
  return Mask(grid, std::move(flags));
}

std::vector<bool> random_domain_flags(Index dense_size, std::uint64_t seed, double keep) {
  Rng rng(seed);
  std::vector<bool> flags(static_cast<std::size_t>(dense_size));
  for (auto&& f : flags) f = rng.uniform() < keep;
  if (std::none_of(flags.begin(), flags.end(), [](bool b) { return b; })) flags.front() = true;
  return flags;
}

}  // namespace morrey
