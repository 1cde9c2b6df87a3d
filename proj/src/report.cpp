// SPDX-License-Identifier: Apache-2.0
#include "morrey/report.hpp"

#include <cmath>
#include <ostream>

namespace morrey {

namespace {

void emit(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(key).dump() + ": ";
        emit(value, out, indent + 2);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        emit(j[i], out, indent + 2);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_double(x) : "null";
      return;
    }
    default: out += j.dump(); return;
  }
}

}  // namespace

std::string dump_json(const Json& doc) {
  std::string out;
  emit(doc, out, 0);
  out += '\n';
  return out;
}

Json to_json(const CheckResult& check) {
  Json params = Json::object();
  for (const auto& [key, value] : check.params) params[key] = value;
  Json j = {{"name", check.name},   {"mode", to_string(check.mode)}, {"lhs", check.lhs},
            {"rhs", check.rhs},     {"constant", check.constant},    {"pass", check.pass},
            {"slack", check.slack}, {"params", params}};
  if (!check.note.empty()) j["note"] = check.note;
  return j;
}

Json to_json(const MorreyNormResult& result) {
  Json center = Json::array();
  for (Index a = 0; a < result.arg_center.size(); ++a) center.push_back(result.arg_center(a));
  return {{"value", result.value},
          {"arg_center", center},
          {"arg_radius", result.arg_radius},
          {"bound", "ladder lower bound"}};
}

Json run_meta() { return {{"tool", "morrey"}, {"version", kToolVersion}}; }

Json checks_document(const std::vector<CheckResult>& checks) {
  Json list = Json::array();
  for (const CheckResult& c : checks) list.push_back(to_json(c));
  return {{"schema", kCheckSchema}, {"checks", list}, {"meta", run_meta()}};
}

void write_curve_csv(std::ostream& os, const Curve& curve) {
  os << "t,value\n";
  for (Index i = 0; i < curve.t.size(); ++i) os << format_double(curve.t(i)) << ',' << format_double(curve.value(i)) << '\n';
}

}  // namespace morrey
