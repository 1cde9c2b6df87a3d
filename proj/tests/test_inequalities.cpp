#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "morrey/inequalities.hpp"

using namespace morrey;
using morrey::test::line;
using morrey::test::square;

namespace {

GridPtr unit_line() { return line(-2, 2, 0.05, 1); }

std::vector<GridFunction> random_family(int count, std::uint64_t base) {
  std::vector<GridFunction> out;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t seed = base + static_cast<std::uint64_t>(i);
    const GridPtr grid = i % 2 == 0 ? line(-1, 1, 1.0 / 32, 0.5)
                                    : square(-1, 1, 1.0 / 16, 0.5, random_domain_flags(32 * 32, seed, 0.85));
    out.push_back(random_function(grid, seed, 1.0 + i % 3));
  }
  return out;
}

}  // namespace

TEST_CASE("L-infinity embedding") {
  const GridPtr grid = unit_line();
  const RadiusLadder ladder = RadiusLadder::geometric(*grid);
  const CheckResult zero = check_linf_embedding(GridFunction::zeros(grid), {1, 1}, ladder, ConstantMode::Paper);
  CHECK(zero.pass);
  CHECK(zero.slack == zero.rhs);

  const GridFunction one = GridFunction::constant(grid, 1);
  const CheckResult paper = check_linf_embedding(one, {1, 1}, ladder, ConstantMode::Paper);
  CHECK(paper.rhs == doctest::Approx(2.0));
  CHECK(std::abs(paper.slack) <= 2 * 0.05);
  const CheckResult discrete = check_linf_embedding(one, {1, 1}, ladder, ConstantMode::Discrete);
  CHECK(discrete.pass);
  CHECK(std::abs(discrete.slack) <= 1e-12);

  for (const GridFunction& g : random_family(20, 10)) {
    for (MorreyParams mp : {MorreyParams{1, 0.5}, MorreyParams{2, 1}, MorreyParams{1.5, 2}}) {
      CHECK(check_linf_embedding(g, mp, RadiusLadder::geometric(g.grid()), ConstantMode::Discrete).pass);
    }
  }
  CHECK_THROWS_AS(check_linf_embedding(one, {1, -0.5}, ladder, ConstantMode::Paper), Error);
}

TEST_CASE("L^q embedding and nesting") {
  const GridPtr grid = unit_line();
  const RadiusLadder ladder = RadiusLadder::geometric(*grid);
  CHECK(check_lq_embedding(GridFunction::zeros(grid), 1, 2, 1, ladder, ConstantMode::Paper).pass);
  // p = q: monotonicity of ρ^{s-n/q} makes the paper constant exact too
  const GridFunction g = test::sample("exp(-x1^2)*(1+x1)", grid);
  CHECK(check_lq_embedding(g, 2, 2, 1, ladder, ConstantMode::Paper).pass);
  CHECK_THROWS_AS(check_lq_embedding(g, 2, 1, 1, ladder, ConstantMode::Discrete), Error);
  CHECK_THROWS_AS(check_lq_embedding(g, 1, 2, 0.2, ladder, ConstantMode::Discrete), Error);

  const CheckResult eq = check_nesting(g, 1.5, 1.5, 0.7, ladder);
  CHECK(eq.pass);
  CHECK(std::abs(eq.slack) <= 1e-12 * std::max(1.0, eq.rhs));
  const CheckResult flat = check_nesting(GridFunction::constant(grid, 3), 1, 2, 1, ladder);
  CHECK(flat.pass);
  CHECK(std::abs(flat.slack) <= 1e-12 * std::max(1.0, flat.rhs));

  for (const GridFunction& f : random_family(20, 40)) {
    const RadiusLadder lad = RadiusLadder::geometric(f.grid());
    const double n = f.grid().dim();
    for (auto [p, q] : {std::pair{1.0, 2.0}, std::pair{2.0, 4.0}, std::pair{1.0, 3.0}}) {
      CHECK(check_lq_embedding(f, p, q, n / q, lad, ConstantMode::Discrete).pass);
      const CheckResult nest = check_nesting(f, p, q, 0.3, lad);
      CHECK(nest.pass);
      CHECK(nest.params.at("implied_lhs") <= nest.params.at("implied_rhs") * (1 + 1e-12));
    }
  }
}

TEST_CASE("lambda-mu agrees with nesting under the reparametrization") {
  for (const GridFunction& g : random_family(10, 70)) {
    const RadiusLadder ladder = RadiusLadder::geometric(g.grid());
    const double n = g.grid().dim();
    const double p = 1, q = 2, s = 0.4 * n / q;
    const CheckResult lm = check_lambda_mu(g, p, q, n - s * p, n - s * q, ladder, ConstantMode::Discrete);
    const CheckResult nest = check_nesting(g, p, q, s, ladder);
    CHECK(lm.pass);
    CHECK(lm.pass == nest.pass);
    CHECK(check_lambda_mu(g, 1, 2, 1, 1, ladder, ConstantMode::Discrete).pass);
  }
  const GridPtr grid = unit_line();
  const RadiusLadder ladder = RadiusLadder::geometric(*grid);
  CHECK(check_lambda_mu(GridFunction::zeros(grid), 1, 2, 1, 1, ladder, ConstantMode::Paper).pass);
  CHECK_THROWS_AS(check_lambda_mu(GridFunction::zeros(grid), 1, 2, 0, 1, ladder, ConstantMode::Paper), Error);
  // (λ-n)/p = 0.5 > (μ-n)/q = -0.25
  CHECK_THROWS_AS(check_lambda_mu(GridFunction::zeros(grid), 1, 2, 1.5, 0.5, ladder, ConstantMode::Paper), Error);
}

TEST_CASE("density by mollified truncations") {
  const GridPtr grid = line(-8, 8, 0.05, 1);
  const RadiusLadder ladder = RadiusLadder::geometric(*grid);
  const CheckResult zero = check_density(GridFunction::zeros(grid), 1, 2, 1, ladder, 4);
  CHECK(zero.pass);
  const CheckResult decay = check_density(test::sample("1/(1+r^2)", grid), 1, 2, 1, ladder, 4);
  CHECK(decay.params.at("monotone") == 1.0);
  CHECK(decay.pass);
  // levels rise past max|g|; once truncation is inactive only the smoothing error is left
  const CheckResult bump = check_density(test::sample("max(0, 1 - r^2)^2", grid), 1, 1, 1, ladder, 4);
  CHECK(bump.params.at("iterate_5") <= 0.05 * bump.params.at("norm"));
  CHECK(bump.pass);
}

TEST_CASE("sigma Hölder chain") {
  const GridPtr grid = unit_line();
  const RadiusLadder ladder = RadiusLadder::geometric(*grid);
  const CheckResult one = check_sigma_holder(GridFunction::constant(grid, 1), 1, 2, 1, ladder, Eigen::ArrayXd());
  CHECK(one.pass);
  CHECK(check_sigma_holder(GridFunction::zeros(grid), 1, 2, 1, ladder, Eigen::ArrayXd()).pass);
  CHECK_THROWS_AS(check_sigma_holder(GridFunction::zeros(grid), 2, 2, 1, ladder, Eigen::ArrayXd()), Error);
  for (const GridFunction& g : random_family(10, 90)) {
    const RadiusLadder lad = RadiusLadder::geometric(g.grid());
    const CheckResult r = check_sigma_holder(g, 1, 3, g.grid().dim() / 3.0, lad, default_t_ladder(g.grid_ptr(), lad));
    CHECK(r.pass);
    CHECK(r.params.at("curve_max_excess") <= 1e-12);
  }
}

TEST_CASE("L1 sandwich") {
  const CheckResult flat = check_l1_sandwich(GridFunction::constant(line(-2, 2, 0.025, 1), 1), 0.5);
  CHECK(flat.pass);
  // the d-collar halves the balls: (2·3 + 2·0.75)/4 = 1.875 in the continuum
  CHECK(std::abs(flat.lhs - 1.875) <= 2 * 0.025 / 0.5);
  const CheckResult zero = check_l1_sandwich(GridFunction::zeros(line(-2, 2, 0.025, 1)), 0.5);
  CHECK(zero.pass);
  CHECK(!zero.note.empty());

  // interior mass: every contributing ball sees the lattice ball count
  const GridPtr grid = line(-2, 2, 0.025, 1);
  const CheckResult bump = check_l1_sandwich(test::sample("max(0, 1 - x1^2)", grid), 0.5);
  CHECK(bump.pass);
  const double cells = 2 * std::ceil(0.5 / 0.025 - 1e-9) - 1;
  CHECK(bump.lhs == doctest::Approx(cells * 0.025 / 0.5).epsilon(1e-12));
  CHECK_THROWS_AS(check_l1_sandwich(GridFunction::zeros(grid), 1.5), Error);
}

TEST_CASE("Chebyshev bound") {
  const GridPtr grid = unit_line();
  const RadiusLadder ladder = RadiusLadder::geometric(*grid);
  for (MorreyParams mp : {MorreyParams{1, 1}, MorreyParams{2, 0.5}, MorreyParams{1.5, 0}}) {
    const CheckResult eq = check_chebyshev(GridFunction::constant(grid, 1), 1, mp, ladder);
    CHECK(eq.pass);
    CHECK(std::abs(eq.slack) <= 1e-12);
  }
  const CheckResult above = check_chebyshev(GridFunction::constant(grid, 1), 2, {1, 1}, ladder);
  CHECK(above.lhs == 0.0);
  CHECK(above.pass);
  CHECK_THROWS_AS(check_chebyshev(GridFunction::constant(grid, 1), 0, {1, 1}, ladder), Error);
}

TEST_CASE("h2 gate") {
  CHECK_NOTHROW(validate_h2(1, {1, 1, 1, 1}));
  CHECK_NOTHROW(validate_h2(2, {1, 2, 1, 1}));
  CHECK_THROWS_AS(validate_h2(2, {1, 1, 1, 1}), Error);
  // n/r = p = 2 > 1 needs q > 2
  CHECK_THROWS_AS(validate_h2(2, {2, 2, 1, 1}), Error);
  CHECK_NOTHROW(validate_h2(2, {2, 2.5, 1, 1}));
  CHECK_THROWS_AS(validate_h2(1, {1, 1, 1.5, 1}), Error);
  CHECK_THROWS_AS(validate_h2(1, {2, 1, 1, 1}), Error);
  CHECK_THROWS_AS(validate_h2(1, {1, 1, 1, 0}), Error);
}

TEST_CASE("multiplication ratio") {
  const GridPtr grid = unit_line();
  const RadiusLadder ladder = RadiusLadder::geometric(*grid);
  const GridFunction one = GridFunction::constant(grid, 1);
  const CheckResult zero = check_multiplication(GridFunction::zeros(grid), one, {}, ladder);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.pass);
  const CheckResult r = check_multiplication(one, one, {1, 1, 1, 1}, ladder);
  CHECK(r.lhs == doctest::Approx(0.5).epsilon(0.03));
  CHECK(r.mode == ConstantMode::Empirical);

  const GridFunction g = test::sample("1/(1+r^0.3)", grid);
  const GridFunction u = test::sample("exp(-4*x1^2)", grid);
  const double base = check_multiplication(g, u, {2, 2, 1, 1}, ladder).lhs;
  for (double c : {-3.0, 0.25, 1e3}) {
    CHECK(test::rel_close(check_multiplication(c * g, u, {2, 2, 1, 1}, ladder).lhs, base, 1e-12));
    CHECK(test::rel_close(check_multiplication(g, c * u, {2, 2, 1, 1}, ladder).lhs, base, 1e-12));
  }
}

TEST_CASE("split chains") {
  const GridPtr grid = unit_line();
  const RadiusLadder ladder = RadiusLadder::geometric(*grid);
  const GridFunction g = test::sample("exp(-x1^2)", grid);
  const GridFunction u = test::sample("1 + x1^2", grid);
  const MultiplicationParams mp{1, 1, 1, 1};

  const CheckResult self = check_eps_split(g, u, mp, ladder, g);
  CHECK(self.pass);
  CHECK(self.lhs <= g.abs_max() * lp_norm(u, 1) * (1 + 1e-12));
  CHECK(self.params.count("eps_hat") == 0);
  const CheckResult with_ratio = check_eps_split(g, u, mp, ladder, truncate(g, 0.5), 0.4);
  CHECK(with_ratio.pass);
  CHECK(with_ratio.params.at("eps_hat") >= 0.0);
  CHECK(check_eps_split(GridFunction::zeros(grid), u, mp, ladder, GridFunction::zeros(grid)).rhs == 0.0);

  const CheckResult sup = check_support_split(g, u, mp, ladder, 10.0, 3);
  CHECK(sup.pass);
  CHECK(sup.params.at("dilated_cells") >= sup.params.at("support_cells"));
  CHECK(check_support_split(g, GridFunction::zeros(grid), mp, ladder, 0.5, 2).rhs == 0.0);

  const CheckResult tau = check_tau_bound(g, u, mp, ladder, 4, default_t_ladder(grid, ladder));
  CHECK(tau.pass);
  CHECK(tau.params.at("tau_at_density") >= 0.0);
  const CheckResult empty = check_tau_bound(g, u, mp, ladder, 1e6, Eigen::ArrayXd());
  CHECK(empty.pass);
  CHECK(empty.params.at("morrey_factor") == 0.0);
  CHECK(empty.params.count("tau_at_density") == 0);
}

TEST_CASE("split chains on random instances") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GridPtr grid = seed % 2 ? line(-1, 1, 1.0 / 32, 0.5) : square(-1, 1, 1.0 / 16, 0.5);
    const RadiusLadder ladder = RadiusLadder::geometric(*grid);
    const GridFunction g = random_function(grid, seed, 2.0);
    const GridFunction u = random_function(grid, seed + 1000, 1.0);
    const MultiplicationParams mp{1.0 + static_cast<double>(seed % 3) * 0.5, 2.5, 1, 1};
    Rng rng(seed);
    const double level = rng.uniform(0.1, 2.0);
    CHECK(check_eps_split(g, u, mp, ladder, truncate(g, level)).pass);
    CHECK(check_eps_split(g, u, mp, ladder, random_function(grid, seed + 7, 0.5)).pass);
    CHECK(check_support_split(g, u, mp, ladder, level, 1 + static_cast<int>(seed % 3)).pass);
    CHECK(check_tau_bound(g, u, mp, ladder, rng.uniform(0.5, 20.0), Eigen::ArrayXd()).pass);
  }
}
