// SPDX-License-Identifier: Apache-2.0
#include "morrey/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace morrey {

namespace {

using Kind = Expression::Kind;
using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make(Kind kind, std::vector<NodePtr> args = {}) {
  auto node = std::make_shared<Expression::Node>();
  node->kind = kind;
  node->args = std::move(args);
  return node;
}

struct FunctionInfo {
  std::string_view name;
  Kind kind;
  std::size_t arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"abs", Kind::Abs, 1},  {"exp", Kind::Exp, 1}, {"log", Kind::Log, 1},
    {"sqrt", Kind::Sqrt, 1}, {"min", Kind::Min, 2}, {"max", Kind::Max, 2},
};

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse_all() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what, ErrorKind kind = ErrorKind::Syntax) const {
    throw ParseError(kind, pos_, what);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Kind::Add, {lhs, term()});
      } else if (accept('-')) {
        lhs = make(Kind::Sub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Kind::Mul, {lhs, unary()});
      } else if (accept('/')) {
        lhs = make(Kind::Div, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::Negate, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Kind::Pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    if (accept('(')) {
      NodePtr inner = expr();
      expect(')');
      return inner;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size()) {
      pos_ = start;
      fail("malformed number '" + text + "'");
    }
    if (!std::isfinite(v)) {
      pos_ = start;
      fail("number out of range '" + text + "'");
    }
    auto node = std::make_shared<Expression::Node>();
    node->kind = Kind::Number;
    node->value = v;
    return node;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "r") return make(Kind::Radius);
    if (name.size() >= 2 && name[0] == 'x' && name[1] != '0' &&
        name.substr(1).find_first_not_of("0123456789") == std::string_view::npos && name.size() <= 4) {
      auto node = std::make_shared<Expression::Node>();
      node->kind = Kind::Variable;
      node->index = std::atoi(std::string(name.substr(1)).c_str());
      return node;
    }
    for (const FunctionInfo& f : kFunctions) {
      if (f.name != name) continue;
      expect('(');
      std::vector<NodePtr> args{expr()};
      while (accept(',')) args.push_back(expr());
      if (args.size() != f.arity) {
        fail(std::string(f.name) + " takes " + std::to_string(f.arity) + " argument(s), got " +
             std::to_string(args.size()));
      }
      expect(')');
      return make(f.kind, std::move(args));
    }
    pos_ = start;
    fail("unknown identifier '" + std::string(name) + "'", ErrorKind::UnknownIdentifier);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

void scan(const Expression::Node& node, int& arity, bool& radius) {
  if (node.kind == Kind::Variable) arity = std::max(arity, node.index);
  if (node.kind == Kind::Radius) {
    radius = true;
    arity = std::max(arity, 1);
  }
  for (const auto& a : node.args) scan(*a, arity, radius);
}

double eval_node(const Expression::Node& node, const Coord& x) {
  const auto arg = [&](std::size_t i) { return eval_node(*node.args[i], x); };
  switch (node.kind) {
    case Kind::Number: return node.value;
    case Kind::Variable: return x(node.index - 1);
    case Kind::Radius: return x.norm();
    case Kind::Negate: return -arg(0);
    case Kind::Add: return arg(0) + arg(1);
    case Kind::Sub: return arg(0) - arg(1);
    case Kind::Mul: return arg(0) * arg(1);
    case Kind::Div: return arg(0) / arg(1);
    case Kind::Pow: return std::pow(arg(0), arg(1));
    case Kind::Abs: return std::abs(arg(0));
    case Kind::Exp: return std::exp(arg(0));
    case Kind::Log: return std::log(arg(0));
    case Kind::Sqrt: return std::sqrt(arg(0));
    case Kind::Min: return std::min(arg(0), arg(1));
    case Kind::Max: return std::max(arg(0), arg(1));
  }
  return 0.0;
}

void print(const Expression::Node& node, std::string& out) {
  const auto binary = [&](const char* op) {
    out += '(';
    print(*node.args[0], out);
    out += op;
    print(*node.args[1], out);
    out += ')';
  };
  switch (node.kind) {
    case Kind::Number: out += format_double(node.value); return;
    case Kind::Variable: out += "x" + std::to_string(node.index); return;
    case Kind::Radius: out += 'r'; return;
    case Kind::Negate:
      out += "(-";
      print(*node.args[0], out);
      out += ')';
      return;
    case Kind::Add: binary(" + "); return;
    case Kind::Sub: binary(" - "); return;
    case Kind::Mul: binary(" * "); return;
    case Kind::Div: binary(" / "); return;
    case Kind::Pow: binary("^"); return;
    default: break;
  }
  for (const FunctionInfo& f : kFunctions) {
    if (f.kind != node.kind) continue;
    out += f.name;
    out += '(';
    for (std::size_t i = 0; i < node.args.size(); ++i) {
      if (i) out += ", ";
      print(*node.args[i], out);
    }
    out += ')';
  }
}

bool same(const Expression::Node& a, const Expression::Node& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  if (a.kind == Kind::Number && !(a.value == b.value && std::signbit(a.value) == std::signbit(b.value))) return false;
  if (a.kind == Kind::Variable && a.index != b.index) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!same(*a.args[i], *b.args[i])) return false;
  }
  return true;
}

}  // namespace

Expression::Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {
  scan(*root_, arity_, uses_radius_);
}

double Expression::eval(const Coord& point) const {
  if (point.size() < arity_) {
    throw Error(ErrorKind::BadParams, "point has " + std::to_string(point.size()) + " coordinates, expression needs " +
                                          std::to_string(arity_));
  }
  return eval_node(*root_, point);
}

std::string Expression::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

bool Expression::operator==(const Expression& other) const { return same(*root_, *other.root_); }

Expression parse(std::string_view src) { return Expression(Parser(src).parse_all()); }

double eval(const Expression& e, const Coord& point) { return e.eval(point); }

}  // namespace morrey
