#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "golden_cases.hpp"
#include "morrey/cli.hpp"

namespace fs = std::filesystem;
using morrey::test::golden_cases;
using morrey::test::strip_meta;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "morrey");
  std::ostringstream out, err;
  const int code = morrey::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "morrey_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

const std::vector<std::string> kLine = {"--box", "-2,2", "--h", "0.05", "--d", "1"};

std::vector<std::string> with_line(std::vector<std::string> args) {
  args.insert(args.begin() + 1, kLine.begin(), kLine.end());
  return args;
}

}  // namespace

TEST_CASE("golden outputs") {
  const bool update = std::getenv("MORREY_UPDATE_GOLDEN") != nullptr;
  for (const auto& c : golden_cases()) {
    CAPTURE(c.name);
    const Run r = run(c.args);
    CHECK(r.err == "");
    CHECK(r.code == 0);
    const fs::path path = fs::path(MORREY_GOLDEN_DIR) / (c.name + "." + c.ext);
    if (update) {
      std::ofstream(path, std::ios::binary) << strip_meta(r.out);
      continue;
    }
    REQUIRE_MESSAGE(fs::exists(path), "missing golden " << path);
    CHECK(strip_meta(r.out) == read_file(path));
    CHECK(run(c.args).out == r.out);
  }
}

TEST_CASE("norm of a constant is close to 2") {
  const Run r = run(golden_cases().front().args);
  CHECK(r.out.find("\"value\": 1.9500000000000002") != std::string::npos);
  CHECK(r.out.find("\"bound\": \"ladder lower bound\"") != std::string::npos);
}

TEST_CASE("exit codes") {
  SUBCASE("bad geometry") {
    const Run r = run({"norm", "--h", "0.3", "--box", "0,1", "--d", "1", "--g-expr", "1"});
    CHECK(r.code == 2);
    CHECK(r.err.find("BadGeometry") != std::string::npos);
    CHECK(r.out.empty());
  }
  SUBCASE("unknown flag prints usage") {
    const Run r = run({"norm", "--bogus", "1"});
    CHECK(r.code == 2);
    CHECK(r.err.find("Usage") != std::string::npos);
  }
  SUBCASE("no subcommand") { CHECK(run({}).code == 2); }
  SUBCASE("help") { CHECK(run({"--help"}).code == 0); }
  SUBCASE("syntax error") {
    const Run r = run(with_line({"norm", "--g-expr", "1+"}));
    CHECK(r.code == 2);
    CHECK(r.err.find("offset 2") != std::string::npos);
  }
  SUBCASE("non-finite sample") {
    const Run r = run({"norm", "--box", "-0.75,0.75", "--h", "0.5", "--d", "1", "--g-expr", "1/x1"});
    CHECK(r.code == 3);
    CHECK(r.err.find("NonFiniteSample") != std::string::npos);
  }
  SUBCASE("failed check") {
    // lattice averages exceed ω_1 at some radii, so the paper constant fails
    const Run r = run(with_line({"check", "--name", "linf_embedding", "--mode", "paper", "--g-expr", "1", "--s", "0"}));
    CHECK(r.code == 1);
    CHECK(r.out.find("\"pass\": false") != std::string::npos);
  }
  SUBCASE("two sources for g") {
    CHECK(run(with_line({"norm", "--g-expr", "1", "--g-file", "x.mgrid"})).code == 2);
  }
  SUBCASE("missing function") { CHECK(run(with_line({"norm"})).code == 2); }
  SUBCASE("unknown check") { CHECK(run(with_line({"check", "--name", "nope", "--g-expr", "1"})).code == 2); }
  SUBCASE("h2 violated") {
    CHECK(run(with_line({"check", "--name", "multiplication", "--g-expr", "1", "--u-expr", "1", "--s", "2"})).code == 2);
  }
  SUBCASE("missing file") { CHECK(run({"norm", "--g-file", "/nonexistent/g.mgrid"}).code == 2); }
}

TEST_CASE("config file with flag override") {
  const fs::path cfg = scratch("run.ini");
  std::ofstream(cfg) << "n = 1\nbox = -2,2\nh = 0.05\nd = 1\ng-expr = 1\np = 1\ns = 0\n";
  const Run from_file = run({"norm", "--config", cfg.string(), "--s", "1"});
  CHECK(from_file.code == 0);
  CHECK(from_file.out == run(golden_cases().front().args).out);
  const Run plain = run({"norm", "--config", cfg.string()});
  CHECK(plain.out.find("\"s\": 0") != std::string::npos);
}

TEST_CASE("dump round trip through the CLI") {
  const fs::path g = scratch("g.mgrid");
  REQUIRE(run(with_line({"dump", "--g-expr", "exp(-x1^2)", "--out", g.string()})).code == 0);
  const Run via_file = run({"norm", "--g-file", g.string(), "--p", "2", "--s", "0.5"});
  const Run via_expr = run(with_line({"norm", "--g-expr", "exp(-x1^2)", "--p", "2", "--s", "0.5"}));
  CHECK(via_file.code == 0);
  CHECK(via_file.out == via_expr.out);
  const Run again = run({"dump", "--g-file", g.string()});
  CHECK(again.out == read_file(g));
}

TEST_CASE("mask file restricts the domain") {
  const fs::path m = scratch("mask.mgrid");
  // only the right half of the line is in the domain
  std::ostringstream dump;
  dump << "MGRID v1 1 0.5 1 -2 2 8\n";
  for (int i = 0; i < 8; ++i) dump << (i < 4 ? "-" : "1") << "\n";
  std::ofstream(m) << dump.str();
  const Run r = run({"norm", "--box", "-2,2", "--h", "0.5", "--d", "1", "--mask-file", m.string(), "--g-expr", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"included\": 4") != std::string::npos);
  CHECK(r.out.find("\"lp_norm\": 2,") != std::string::npos);
  const Run mismatch = run({"norm", "--box", "-2,2", "--h", "0.25", "--d", "1", "--mask-file", m.string(), "--g-expr", "1"});
  CHECK(mismatch.code == 2);
}

TEST_CASE("field dump") {
  const fs::path f = scratch("field.csv");
  REQUIRE(run(with_line({"norm", "--g-expr", "1", "--dump-field", f.string()})).code == 0);
  const std::string csv = read_file(f);
  CHECK(csv.rfind("x1,rho,value\n", 0) == 0);
}

TEST_CASE("thread count does not change output") {
  for (const auto& c : golden_cases()) {
    setenv("MORREY_THREADS", "1", 1);
    const std::string one = run(c.args).out;
    setenv("MORREY_THREADS", "0", 1);
    const std::string autos = run(c.args).out;
    setenv("MORREY_THREADS", "3", 1);
    const std::string three = run(c.args).out;
    unsetenv("MORREY_THREADS");
    CHECK_MESSAGE(one == autos, c.name);
    CHECK_MESSAGE(one == three, c.name);
  }
}
