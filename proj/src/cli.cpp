// SPDX-License-Identifier: Apache-2.0
#include "morrey/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "morrey/approx.hpp"
#include "morrey/corpus.hpp"
#include "morrey/expr.hpp"
#include "morrey/grid.hpp"
#include "morrey/inequalities.hpp"
#include "morrey/local_integrals.hpp"
#include "morrey/norms.hpp"
#include "morrey/report.hpp"

namespace morrey::cli {

namespace {

struct RunConfig {
  int n = 1;
  std::vector<double> box;
  std::optional<double> h;
  std::optional<double> d;
  std::string mask_file;
  std::string g_expr, g_file, u_expr, u_file;
  double p = 1.0;
  std::optional<double> q;
  std::optional<double> s;
  std::optional<double> lambda, mu;
  int r_order = 1;
  double k = 4.0;
  std::optional<double> level;
  int width = 2;
  std::optional<double> rho;
  double eps = 0.05;
  std::uint64_t seed = 1;
  int count = 20;
  std::string family = "bounded-random";
  double ladder_ratio = 1.25;
  std::string t_ladder;
  std::string out;
  std::string format;
  std::string name;
  std::string mode = "both";
  std::string curve = "sigma";
  std::string dump_field;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::BadParams, std::string("cannot parse ") + what + " entry '" + item + "'");
    }
  }
  return values;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GridFunction load_dump(const std::string& path) {
  std::istringstream in(slurp(path));
  return read_dump(in);
}

/// Grid plus the functions the subcommand needs, resolved from flags.
class Inputs {
 public:
  explicit Inputs(const RunConfig& cfg) : cfg_(cfg) {
    if (!cfg.g_expr.empty() && !cfg.g_file.empty()) {
      throw Error(ErrorKind::BadParams, "g: give either --g-expr or --g-file, not both");
    }
    if (!cfg.u_expr.empty() && !cfg.u_file.empty()) {
      throw Error(ErrorKind::BadParams, "u: give either --u-expr or --u-file, not both");
    }
    if (!cfg.g_expr.empty()) g_expr_ = parse(cfg.g_expr);
    if (!cfg.u_expr.empty()) u_expr_ = parse(cfg.u_expr);
  }

  bool has_g() const { return g_expr_ || !cfg_.g_file.empty(); }
  bool has_u() const { return u_expr_ || !cfg_.u_file.empty(); }
  const std::optional<Expression>& g_expr() const { return g_expr_; }

  /// Lattice from --n/--box/--h/--d, with the inclusion flags of --mask-file if given.
  GridSpec spec() const {
    if (cfg_.box.empty() || !cfg_.h || !cfg_.d) {
      throw Error(ErrorKind::BadParams, "grid needs --box, --h and --d (or a --g-file/--u-file dump)");
    }
    if (cfg_.n < 1 || cfg_.n > kMaxDim) throw Error(ErrorKind::BadParams, "--n must be 1, 2 or 3");
    std::vector<double> bounds = cfg_.box;
    if (bounds.size() == 2) {
      for (int a = 1; a < cfg_.n; ++a) {
        bounds.push_back(bounds[0]);
        bounds.push_back(bounds[1]);
      }
    }
    if (bounds.size() != static_cast<std::size_t>(2 * cfg_.n)) {
      throw Error(ErrorKind::BadParams, "--box needs lo,hi or one lo,hi pair per axis");
    }
    GridSpec spec;
    spec.n = cfg_.n;
    spec.box = make_box(bounds);
    spec.h = *cfg_.h;
    spec.d = *cfg_.d;
    if (!cfg_.mask_file.empty()) {
      std::istringstream in(slurp(cfg_.mask_file));
      const GridPtr masked = read_grid_dump(in);
      std::vector<bool> flags(static_cast<std::size_t>(masked->dense_size()));
      for (Index i = 0; i < masked->dense_size(); ++i) flags[static_cast<std::size_t>(i)] = masked->included_dense(i);
      spec.mask = std::move(flags);
    }
    return spec;
  }

  const GridPtr& grid() {
    if (grid_) return grid_;
    if (!cfg_.g_file.empty()) {
      g_ = load_dump(cfg_.g_file);
      grid_ = g_->grid_ptr();
    } else if (!cfg_.u_file.empty()) {
      u_ = load_dump(cfg_.u_file);
      grid_ = u_->grid_ptr();
    } else {
      grid_ = build_grid(spec());
    }
    return grid_;
  }

  const GridFunction& g() {
    if (!has_g()) throw Error(ErrorKind::BadParams, "this command needs g (--g-expr or --g-file)");
    return resolve(g_, g_expr_, cfg_.g_file);
  }

  const GridFunction& u() {
    if (!has_u()) throw Error(ErrorKind::BadParams, "this command needs u (--u-expr or --u-file)");
    return resolve(u_, u_expr_, cfg_.u_file);
  }

  RadiusLadder ladder() { return RadiusLadder::geometric(*grid(), cfg_.ladder_ratio); }

  Eigen::ArrayXd t_ladder() {
    const std::string& spec = cfg_.t_ladder;
    if (spec.empty()) return default_t_ladder(grid(), ladder());
    if (spec.rfind("geom:", 0) == 0) {
      const std::vector<double> c = parse_list(spec.substr(5), "--t-ladder");
      if (c.size() != 1 || c[0] < 1 || c[0] != std::floor(c[0])) {
        throw Error(ErrorKind::BadParams, "--t-ladder geom:COUNT needs a positive integer");
      }
      return default_t_ladder(grid(), ladder(), static_cast<int>(c[0]));
    }
    const std::vector<double> t = parse_list(spec, "--t-ladder");
    return Eigen::Map<const Eigen::ArrayXd>(t.data(), static_cast<Index>(t.size()));
  }

 private:
  const GridFunction& resolve(std::optional<GridFunction>& slot, const std::optional<Expression>& expr,
                              const std::string& file) {
    if (slot) return *slot;
    const GridPtr& lattice = grid();
    if (expr) {
      slot = sample(*expr, lattice);
    } else {
      slot = load_dump(file);
      require_same_grid(*lattice, slot->grid());
      if (!(slot->grid() == *lattice)) throw Error(ErrorKind::BadParams, "g and u dumps have different masks");
    }
    return *slot;
  }

  const RunConfig& cfg_;
  std::optional<Expression> g_expr_, u_expr_;
  GridPtr grid_;
  std::optional<GridFunction> g_, u_;
};

/// Lower median of |g|.
double median_abs(const GridFunction& g) {
  std::vector<double> a(static_cast<std::size_t>(g.size()));
  for (Index c = 0; c < g.size(); ++c) a[static_cast<std::size_t>(c)] = std::abs(g[c]);
  const std::size_t mid = (a.size() - 1) / 2;
  std::nth_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(mid), a.end());
  return a[mid];
}

std::vector<ConstantMode> modes(const std::string& mode) {
  if (mode == "both") return {ConstantMode::Paper, ConstantMode::Discrete};
  if (mode == "paper") return {ConstantMode::Paper};
  if (mode == "discrete") return {ConstantMode::Discrete};
  throw Error(ErrorKind::BadParams, "--mode must be paper, discrete or both");
}

double require(const std::optional<double>& v, const char* flag) {
  if (!v) throw Error(ErrorKind::BadParams, std::string("this check needs ") + flag);
  return *v;
}

Json grid_json(const DomainGrid& grid) {
  Json lower = Json::array(), upper = Json::array();
  for (int a = 0; a < grid.dim(); ++a) {
    lower.push_back(grid.box().lower(a));
    upper.push_back(grid.box().upper(a));
  }
  return {{"n", grid.dim()},     {"lower", lower},
          {"upper", upper},      {"h", grid.spacing()},
          {"d", grid.radius_cap()}, {"cells", grid.dense_size()},
          {"included", grid.size()}};
}

MultiplicationParams mult_params(const RunConfig& cfg) {
  MultiplicationParams m;
  m.p = cfg.p;
  m.q = cfg.q.value_or(cfg.p);
  m.s = cfg.s.value_or(1.0);
  m.r_order = cfg.r_order;
  return m;
}

struct Outcome {
  std::string text;
  int code = kOk;
};

Outcome run_norm(const RunConfig& cfg, Inputs& in) {
  const GridFunction& g = in.g();
  const RadiusLadder ladder = in.ladder();
  const double s = cfg.s.value_or(0.0);
  const LocalIntegralField field = ppower_field(g, cfg.p, ladder);
  Json doc = {{"schema", "morrey-norm/1"}, {"grid", grid_json(g.grid())}};
  doc["params"] = {{"p", cfg.p}, {"s", s}, {"r_order", cfg.r_order}, {"ladder_ratio", cfg.ladder_ratio},
                   {"ladder_size", ladder.size()}};
  doc["lp_norm"] = lp_norm(g, cfg.p);
  doc["morrey"] = to_json(morrey_norm(field, s));
  doc["sobolev_norm"] = sobolev_norm(g, SobolevParams{cfg.r_order, cfg.p});
  if (cfg.lambda) {
    const ClassicalMorreyResult c = classical_morrey_norm(g, cfg.p, *cfg.lambda, ladder);
    Json cj = {{"lambda", *cfg.lambda}, {"s", c.s}, {"norm", to_json(c.norm)}};
    if (c.warning) cj["warning"] = *c.warning;
    doc["classical"] = cj;
  }
  doc["meta"] = run_meta();
  if (!cfg.dump_field.empty()) {
    std::ofstream f(cfg.dump_field, std::ios::binary);
    if (!f) throw Error(ErrorKind::Io, "cannot write '" + cfg.dump_field + "'");
    write_field_csv(f, field);
  }
  return {dump_json(doc), kOk};
}

Outcome run_curve(const RunConfig& cfg, Inputs& in) {
  const GridFunction& g = in.g();
  const MorreyParams params{cfg.p, cfg.s.value_or(0.0)};
  const RadiusLadder ladder = in.ladder();
  const Eigen::ArrayXd t = in.t_ladder();
  Curve curve;
  if (cfg.curve == "sigma") {
    curve = sigma_estimate(g, params, ladder, t);
  } else if (cfg.curve == "tau") {
    curve = modulus_of_continuity(g, params, ladder, t);
  } else {
    throw Error(ErrorKind::BadParams, "--curve must be sigma or tau");
  }
  if (cfg.format.empty() || cfg.format == "csv") {
    std::ostringstream os;
    write_curve_csv(os, curve);
    return {os.str(), kOk};
  }
  if (cfg.format != "json") throw Error(ErrorKind::BadParams, "--format must be json or csv");
  Json ts = Json::array(), vs = Json::array();
  for (Index i = 0; i < curve.t.size(); ++i) {
    ts.push_back(curve.t(i));
    vs.push_back(curve.value(i));
  }
  Json doc = {{"schema", "morrey-curve/1"}, {"curve", cfg.curve}, {"p", params.p}, {"s", params.s},
              {"t", ts},                    {"value", vs},        {"meta", run_meta()}};
  return {dump_json(doc), kOk};
}

Outcome run_threshold(const RunConfig& cfg, Inputs& in) {
  const ThresholdResult r = r_of_k(in.g(), cfg.k);
  Json doc = {{"schema", "morrey-threshold/1"},
              {"k", r.k},
              {"r_k", r.r_k},
              {"achieved_density", r.achieved_density},
              {"meta", run_meta()}};
  return {dump_json(doc), kOk};
}

std::vector<std::string> split_names(const std::string& names) {
  std::vector<std::string> out;
  std::stringstream ss(names);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void run_one_check(const std::string& name, const RunConfig& cfg, Inputs& in, std::vector<CheckResult>& out) {
  const double s = cfg.s.value_or(0.0);
  const auto q = [&] { return require(cfg.q, "--q"); };
  if (name == "degenerate") {
    if (!in.g_expr()) throw Error(ErrorKind::BadParams, "degenerate needs --g-expr (it resamples g)");
    out.push_back(degenerate_check(*in.g_expr(), in.spec(), MorreyParams{cfg.p, s}, cfg.ladder_ratio));
    return;
  }
  const RadiusLadder ladder = in.ladder();
  if (name == "linf_embedding") {
    for (ConstantMode m : modes(cfg.mode)) out.push_back(check_linf_embedding(in.g(), MorreyParams{cfg.p, s}, ladder, m));
  } else if (name == "lq_embedding") {
    for (ConstantMode m : modes(cfg.mode)) out.push_back(check_lq_embedding(in.g(), cfg.p, q(), s, ladder, m));
  } else if (name == "nesting") {
    out.push_back(check_nesting(in.g(), cfg.p, q(), s, ladder));
  } else if (name == "lambda_mu") {
    const double lambda = require(cfg.lambda, "--lambda");
    const double mu = require(cfg.mu, "--mu");
    for (ConstantMode m : modes(cfg.mode)) out.push_back(check_lambda_mu(in.g(), cfg.p, q(), lambda, mu, ladder, m));
  } else if (name == "density") {
    out.push_back(check_density(in.g(), cfg.p, cfg.q.value_or(cfg.p), s, ladder, cfg.width, cfg.eps));
  } else if (name == "sigma_holder") {
    out.push_back(check_sigma_holder(in.g(), cfg.p, q(), s, ladder, in.t_ladder()));
  } else if (name == "l1_sandwich") {
    out.push_back(check_l1_sandwich(in.g(), cfg.rho.value_or(in.grid()->radius_cap())));
  } else if (name == "chebyshev") {
    const GridFunction& g = in.g();
    out.push_back(check_chebyshev(g, cfg.level.value_or(median_abs(g)), MorreyParams{cfg.p, s}, ladder));
  } else if (name == "multiplication") {
    out.push_back(check_multiplication(in.g(), in.u(), mult_params(cfg), ladder));
  } else if (name == "eps_split") {
    const GridFunction& g = in.g();
    const GridFunction phi = truncate(g, cfg.level.value_or(median_abs(g)));
    out.push_back(check_eps_split(g, in.u(), mult_params(cfg), ladder, phi));
  } else if (name == "support_split") {
    const GridFunction& g = in.g();
    out.push_back(check_support_split(g, in.u(), mult_params(cfg), ladder, cfg.level.value_or(median_abs(g)),
                                      cfg.width));
  } else if (name == "tau_bound") {
    out.push_back(check_tau_bound(in.g(), in.u(), mult_params(cfg), ladder, cfg.k, in.t_ladder()));
  } else {
    throw Error(ErrorKind::BadParams, "unknown check '" + name + "'");
  }
}

int verdict(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; }) ? kOk
                                                                                                  : kCheckFailed;
}

Outcome run_check(const RunConfig& cfg, Inputs& in) {
  const std::vector<std::string> names = split_names(cfg.name);
  if (names.empty()) throw Error(ErrorKind::BadParams, "check needs --name");
  std::vector<CheckResult> checks;
  for (const std::string& name : names) run_one_check(name, cfg, in, checks);
  return {dump_json(checks_document(checks)), verdict(checks)};
}

double ratio_of(const CheckResult& c) { return c.lhs; }

Outcome run_corpus(const RunConfig& cfg, Inputs& in) {
  if (!cfg.mask_file.empty() || !cfg.g_file.empty() || !cfg.u_file.empty()) {
    throw Error(ErrorKind::BadParams, "corpus samples expressions on --box/--h/--d and takes no dump files");
  }
  if (cfg.count < 1) throw Error(ErrorKind::BadParams, "--count must be >= 1");
  const GridSpec spec = in.spec();
  const MultiplicationParams params = mult_params(cfg);
  validate_h2(spec.n, params);
  const CorpusGeometry geometry{spec.n, spec.box, spec.d, params.q};
  const CorpusFamily family = parse_family(cfg.family);
  const Corpus gs = build_corpus(cfg.seed, cfg.count, family, geometry);
  const Corpus us = build_corpus(cfg.seed + 1, cfg.count, CorpusFamily::CompactBump, geometry);

  GridSpec fine = spec;
  fine.h = spec.h / 2.0;
  const GridPtr coarse_grid = build_grid(spec);
  const GridPtr fine_grid = build_grid(fine);
  const RadiusLadder coarse_ladder = RadiusLadder::geometric(*coarse_grid, cfg.ladder_ratio);
  const RadiusLadder fine_ladder = RadiusLadder::geometric(*fine_grid, cfg.ladder_ratio);

  std::vector<CheckResult> checks;
  double sup_h = 0.0, sup_half = 0.0, scale_dev = 0.0;
  bool finite = true;
  for (std::size_t j = 0; j < gs.entries.size(); ++j) {
    const GridFunction g = sample(gs.entries[j].expr, coarse_grid);
    const GridFunction u = sample(us.entries[j].expr, coarse_grid);
    CheckResult r = check_multiplication(g, u, params, coarse_ladder);
    r.params["member"] = static_cast<double>(j);
    const double ratio = ratio_of(r);
    finite = finite && std::isfinite(ratio);
    sup_h = std::max(sup_h, ratio);

    const CheckResult scaled = check_multiplication(3.5 * g, u, params, coarse_ladder);
    if (ratio > 0.0) scale_dev = std::max(scale_dev, std::abs(ratio_of(scaled) - ratio) / ratio);

    const GridFunction gf = sample(gs.entries[j].expr, fine_grid);
    const GridFunction uf = sample(us.entries[j].expr, fine_grid);
    const double ratio_half = ratio_of(check_multiplication(gf, uf, params, fine_ladder));
    finite = finite && std::isfinite(ratio_half);
    sup_half = std::max(sup_half, ratio_half);
    r.params["ratio_h_half"] = ratio_half;
    checks.push_back(std::move(r));
  }
  const double change = sup_h > 0.0 ? std::abs(sup_half - sup_h) / sup_h : 0.0;
  const std::map<std::string, double> echo{{"sup_ratio_h", sup_h}, {"sup_ratio_h_half", sup_half}};
  checks.push_back(make_check("refinement_stability", ConstantMode::Empirical, change, 0.15, 0.15, echo));
  checks.push_back(make_check("scale_invariance", ConstantMode::Empirical, scale_dev, 1e-12, 1e-12, {{"factor", 3.5}}));

  Json doc = checks_document(checks);
  Json meta = doc["meta"];
  doc.erase("meta");
  doc["aggregate"] = {{"family", to_string(family)},
                      {"seed", cfg.seed},
                      {"count", cfg.count},
                      {"all_finite", finite},
                      {"sup_ratio_h", sup_h},
                      {"sup_ratio_h_half", sup_half},
                      {"refinement_change", change},
                      {"scale_invariance_max_dev", scale_dev}};
  doc["meta"] = meta;
  const int code = finite ? verdict(checks) : kCheckFailed;
  return {dump_json(doc), code};
}

Outcome run_dump(const RunConfig&, Inputs& in) {
  std::ostringstream os;
  write_dump(os, in.has_g() ? in.g() : in.u());
  return {os.str(), kOk};
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonFiniteSample:
    case ErrorKind::Infeasible: return kNumeric;
    default: return kUsage;
  }
}

void add_options(CLI::App& app, RunConfig& cfg) {
  app.add_option("--n", cfg.n, "dimension (1-3)");
  app.add_option("--box", cfg.box, "lo,hi per axis (one pair is repeated for every axis)")->delimiter(',');
  app.add_option("--h", cfg.h, "lattice spacing");
  app.add_option("--d", cfg.d, "radius cap");
  app.add_option("--mask-file", cfg.mask_file, "MGRID dump whose included cells form the domain mask");
  app.add_option("--g-expr", cfg.g_expr, "expression for g");
  app.add_option("--g-file", cfg.g_file, "MGRID dump for g");
  app.add_option("--u-expr", cfg.u_expr, "expression for u");
  app.add_option("--u-file", cfg.u_file, "MGRID dump for u");
  app.add_option("--p", cfg.p, "exponent p");
  app.add_option("--q", cfg.q, "exponent q");
  app.add_option("--s", cfg.s, "Morrey exponent s");
  app.add_option("--lambda", cfg.lambda, "classical exponent lambda");
  app.add_option("--mu", cfg.mu, "classical exponent mu");
  app.add_option("--r-order", cfg.r_order, "Sobolev order");
  app.add_option("--k", cfg.k, "density parameter for r[g](k)");
  app.add_option("--level", cfg.level, "truncation level (default: median |g|)");
  app.add_option("--width", cfg.width, "mollifier or dilation width in cells");
  app.add_option("--rho", cfg.rho, "radius for l1_sandwich (default: d)");
  app.add_option("--eps", cfg.eps, "target fraction for the density check");
  app.add_option("--seed", cfg.seed, "corpus seed");
  app.add_option("--count", cfg.count, "corpus size");
  app.add_option("--family", cfg.family, "bounded-random, radial-decay or compact-bump");
  app.add_option("--ladder-ratio", cfg.ladder_ratio, "geometric radius ladder ratio");
  app.add_option("--t-ladder", cfg.t_ladder, "t1,t2,... or geom:COUNT")
      ->multi_option_policy(CLI::MultiOptionPolicy::Join)
      ->delimiter(',');
  app.add_option("--out", cfg.out, "output path (default: stdout)");
  app.add_option("--format", cfg.format, "json or csv");
  app.add_option("--name", cfg.name, "check name(s), comma separated");
  app.add_option("--mode", cfg.mode, "paper, discrete or both");
  app.add_option("--curve", cfg.curve, "sigma or tau");
  app.add_option("--dump-field", cfg.dump_field, "write the p-power field as CSV");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Morrey-type norms and inequality checks on lattice grids", "morrey"};
  app.set_help_flag("--help", "print usage");
  app.set_config("--config", "", "flat key = value file; flags override it");
  add_options(app, cfg);
  app.require_subcommand(1);
  const char* subcommands[][2] = {{"norm", "L^p, Morrey and Sobolev norms of g"},
                                  {"curve", "sigma or tau curve of g"},
                                  {"threshold", "r[g](k)"},
                                  {"check", "named inequality checks"},
                                  {"corpus", "multiplication bound over a generated corpus"},
                                  {"dump", "MGRID dump of g (or u)"}};
  for (const auto& sc : subcommands) app.add_subcommand(sc[0], sc[1])->fallthrough();

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("morrey");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    err << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    Inputs in(cfg);
    const std::string sub = app.get_subcommands().front()->get_name();
    Outcome result;
    if (sub == "norm") result = run_norm(cfg, in);
    else if (sub == "curve") result = run_curve(cfg, in);
    else if (sub == "threshold") result = run_threshold(cfg, in);
    else if (sub == "check") result = run_check(cfg, in);
    else if (sub == "corpus") result = run_corpus(cfg, in);
    else result = run_dump(cfg, in);

    if (cfg.out.empty()) {
      out << result.text;
    } else {
      std::ofstream f(cfg.out, std::ios::binary);
      if (!f) throw Error(ErrorKind::Io, "cannot write '" + cfg.out + "'");
      f << result.text;
    }
    return result.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  }
}

}  // namespace morrey::cli
