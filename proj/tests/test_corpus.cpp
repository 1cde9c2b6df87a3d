#include <set>

#include "doctest.h"
#include "helpers.hpp"

using namespace morrey;

namespace {

CorpusGeometry geometry(int n) {
  std::vector<double> bounds;
  for (int a = 0; a < n; ++a) {
    bounds.push_back(-3);
    bounds.push_back(3);
  }
  return CorpusGeometry{n, make_box(bounds), 1.0, 1.0};
}

}  // namespace

TEST_CASE("same seed, same corpus") {
  for (CorpusFamily family : {CorpusFamily::BoundedRandom, CorpusFamily::RadialDecay, CorpusFamily::CompactBump}) {
    const Corpus a = build_corpus(17, 12, family, geometry(2));
    const Corpus b = build_corpus(17, 12, family, geometry(2));
    REQUIRE(a.entries.size() == 12);
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
      CHECK(a.entries[i].expr.to_string() == b.entries[i].expr.to_string());
      CHECK(a.entries[i].params == b.entries[i].params);
    }
  }
  const Corpus c = build_corpus(18, 12, CorpusFamily::BoundedRandom, geometry(2));
  CHECK(c.entries[0].expr.to_string() != build_corpus(17, 12, CorpusFamily::BoundedRandom, geometry(2)).entries[0].expr.to_string());
  CHECK_THROWS_AS(build_corpus(1, 0, CorpusFamily::BoundedRandom, geometry(1)), Error);
}

TEST_CASE("radial decay exponents span (0, 2n/p]") {
  const Corpus c = build_corpus(1, 5, CorpusFamily::RadialDecay, geometry(1));
  std::set<double> alphas;
  for (const CorpusEntry& e : c.entries) alphas.insert(e.params.at("alpha"));
  CHECK(alphas.size() == 5);
  CHECK(*alphas.begin() > 0.0);
  CHECK(*alphas.rbegin() == doctest::Approx(2.0));
}

TEST_CASE("compact bumps vanish within d of the boundary") {
  for (int n = 1; n <= 2; ++n) {
    const CorpusGeometry geo = geometry(n);
    const Corpus c = build_corpus(3, 10, CorpusFamily::CompactBump, geo);
    const GridPtr grid = n == 1 ? test::line(-3, 3, 0.05, 1) : test::square(-3, 3, 0.1, 1);
    for (const CorpusEntry& e : c.entries) {
      const GridFunction g = sample(e.expr, grid);
      CHECK(g.abs_max() > 0.0);
      for (Index i = 0; i < grid->size(); ++i) {
        const Coord x = grid->center(i);
        const double margin = std::min((x.array() + 3).minCoeff(), (3 - x.array()).minCoeff());
        if (margin <= geo.d) CHECK(g[i] == 0.0);
      }
    }
  }
}

TEST_CASE("bounded random members are bounded and finite") {
  const Corpus c = build_corpus(9, 20, CorpusFamily::BoundedRandom, geometry(1));
  const GridPtr grid = test::line(-3, 3, 0.05, 1);
  for (const CorpusEntry& e : c.entries) {
    const GridFunction g = sample(e.expr, grid);
    CHECK(g.abs_max() < 10.0);
  }
}

TEST_CASE("family names") {
  CHECK(parse_family("radial-decay") == CorpusFamily::RadialDecay);
  CHECK(std::string(to_string(CorpusFamily::CompactBump)) == "compact-bump");
  CHECK_THROWS_AS(parse_family("gaussian"), Error);
}

TEST_CASE("generators are deterministic") {
  const GridPtr grid = test::square(0, 1, 0.125, 0.25);
  CHECK((random_function(grid, 4).values() == random_function(grid, 4).values()).all());
  CHECK((random_mask(grid, 4).flags() == random_mask(grid, 4).flags()).all());
  CHECK(random_function(grid, 4, 2.0).abs_max() <= 2.0);
  const auto flags = random_domain_flags(10, 1, 0.0);
  CHECK(std::count(flags.begin(), flags.end(), true) >= 1);
}
