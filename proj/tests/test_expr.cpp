#include <cmath>

#include "doctest.h"
#include "morrey/corpus.hpp"
#include "morrey/expr.hpp"

using namespace morrey;

namespace {

Coord point(std::initializer_list<double> xs) {
  Coord c(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) c(i++) = x;
  return c;
}

void expect_parse_error(const char* src, ErrorKind kind, std::size_t offset) {
  try {
    parse(src);
    FAIL("expected a parse error for " << src);
  } catch (const ParseError& e) {
    CHECK(e.kind() == kind);
    CHECK(e.offset() == offset);
  }
}

}  // namespace

TEST_CASE("arity") {
  CHECK(parse("1/(1+r^0.5)").arity() >= 1);
  CHECK(parse("1/(1+r^0.5)").uses_radius());
  CHECK(parse("x1*x2").arity() == 2);
  CHECK(parse("3").arity() == 0);
  CHECK(parse("x3 + 1").arity() == 3);
}

TEST_CASE("evaluation") {
  CHECK(eval(parse("1/(1+r^2)"), point({0.0})) == 1.0);
  CHECK(eval(parse("x1*x2"), point({2, 3})) == 6.0);
  CHECK(eval(parse("2^3^2"), point({0.0})) == 512.0);
  CHECK(eval(parse("r"), point({3, 4})) == 5.0);
  CHECK(eval(parse("min(x1, 2) + max(x1, 2)"), point({5})) == 7.0);
  CHECK(eval(parse("abs(-3) * sqrt(4) - log(exp(1))"), point({0.0})) == doctest::Approx(5.0));
}

TEST_CASE("precedence and associativity") {
  CHECK(eval(parse("-2^2"), point({0.0})) == -4.0);
  CHECK(eval(parse("2^-1"), point({0.0})) == 0.5);
  CHECK(eval(parse("8/4/2"), point({0.0})) == 1.0);
  CHECK(eval(parse("1-2-3"), point({0.0})) == -4.0);
  CHECK(eval(parse("1+2*3"), point({0.0})) == 7.0);
  CHECK(eval(parse(" ( 1 + 2 ) * 3 "), point({0.0})) == 9.0);
  CHECK(eval(parse("1e-3*1E3"), point({0.0})) == 1.0);
}

TEST_CASE("IEEE domain results are returned, not thrown") {
  CHECK(std::isnan(eval(parse("log(-1)"), point({0.0}))));
  CHECK(std::isinf(eval(parse("0^-1"), point({0.0}))));
  CHECK_THROWS_AS(eval(parse("x2"), point({1.0})), Error);
}

TEST_CASE("parse errors carry byte offsets") {
  expect_parse_error("1+", ErrorKind::Syntax, 2);
  expect_parse_error("(1", ErrorKind::Syntax, 2);
  expect_parse_error("1 2", ErrorKind::Syntax, 2);
  expect_parse_error("", ErrorKind::Syntax, 0);
  expect_parse_error("foo(1)", ErrorKind::UnknownIdentifier, 0);
  expect_parse_error("1 + y", ErrorKind::UnknownIdentifier, 4);
  expect_parse_error("x0", ErrorKind::UnknownIdentifier, 0);
  expect_parse_error("min(1)", ErrorKind::Syntax, 5);
  expect_parse_error("1 $ 2", ErrorKind::Syntax, 2);
}

TEST_CASE("print then parse is a fixpoint") {
  const char* sources[] = {"1/(1+r^0.5)", "-x1^2", "2^3^2", "(1-2)-3", "1-(2-3)", "min(x1, -x2)*abs(x1)",
                           "0.1 + 1e-300", "-(-(x1))", "exp(log(sqrt(x1*x1 + 1)))", "x1/x2/x3"};
  for (const char* src : sources) {
    const Expression e = parse(src);
    const Expression again = parse(e.to_string());
    CHECK_MESSAGE(again == e, src);
    CHECK(again.to_string() == e.to_string());
  }
}

TEST_CASE("fuzz: corpus expressions survive printing") {
  for (CorpusFamily family : {CorpusFamily::BoundedRandom, CorpusFamily::RadialDecay, CorpusFamily::CompactBump}) {
    const Corpus corpus = build_corpus(5, 10, family, CorpusGeometry{2, make_box({-3, 3, -3, 3}), 1.0, 1.0});
    for (const CorpusEntry& entry : corpus.entries) {
      const Expression again = parse(entry.expr.to_string());
      CHECK(again == entry.expr);
      const Coord x = point({0.3, -1.1});
      CHECK(eval(again, x) == eval(entry.expr, x));
    }
  }
}

TEST_CASE("fuzz: random byte strings either parse or raise ParseError") {
  Rng rng(99);
  const std::string alphabet = "x1r2+-*/^().,e 0abslogminmaxsqrt";
  for (int trial = 0; trial < 2000; ++trial) {
    std::string src;
    const int len = 1 + static_cast<int>(rng.uniform() * 12);
    for (int i = 0; i < len; ++i) src += alphabet[static_cast<std::size_t>(rng.uniform() * alphabet.size())];
    try {
      const Expression e = parse(src);
      CHECK(parse(e.to_string()) == e);
    } catch (const ParseError& e) {
      CHECK(e.offset() <= src.size());
    }
  }
}
