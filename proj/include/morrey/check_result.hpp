// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <map>
#include <string>

namespace morrey {

enum class ConstantMode { Paper, Discrete, Empirical };

inline const char* to_string(ConstantMode mode) {
  switch (mode) {
    case ConstantMode::Paper: return "paper-constant";
    case ConstantMode::Discrete: return "discrete-constant";
    case ConstantMode::Empirical: return "empirical";
  }
  return "unknown";
}

/// Verdict of one inequality: pass <=> lhs <= rhs + 1e-12·max(1, rhs).
struct CheckResult {
  std::string name;
  ConstantMode mode = ConstantMode::Discrete;
  double lhs = 0.0;
  double rhs = 0.0;
  double constant = 0.0;
  bool pass = false;
  double slack = 0.0;
  std::map<std::string, double> params;
  std::string note;
};

inline double check_tolerance(double rhs) { return 1e-12 * std::max(1.0, rhs); }

inline bool within(double lhs, double rhs) { return lhs <= rhs + check_tolerance(rhs); }

inline CheckResult make_check(std::string name, ConstantMode mode, double lhs, double rhs, double constant,
                              std::map<std::string, double> params = {}, std::string note = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.mode = mode;
  r.lhs = lhs;
  r.rhs = rhs;
  r.constant = constant;
  r.pass = within(lhs, rhs);
  r.slack = rhs - lhs;
  r.params = std::move(params);
  r.note = std::move(note);
  return r;
}

}  // namespace morrey
