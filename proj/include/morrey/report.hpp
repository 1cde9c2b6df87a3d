// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "morrey/approx.hpp"
#include "morrey/check_result.hpp"
#include "morrey/norms.hpp"

namespace morrey {

using Json = nlohmann::ordered_json;

inline constexpr const char* kCheckSchema = "morrey-check/1";
inline constexpr const char* kToolVersion = "1.0.0";

/// Pretty-printed JSON with every float as %.17g; non-finite floats become null.
std::string dump_json(const Json& doc);

Json to_json(const CheckResult& check);
Json to_json(const MorreyNormResult& result);

/// {"schema": "morrey-check/1", "checks": [...], "meta": {...}}
Json checks_document(const std::vector<CheckResult>& checks);

/// Run metadata, kept under "meta" so golden comparisons can drop it.
Json run_meta();

/// Two-column "t,value" CSV.
void write_curve_csv(std::ostream& os, const Curve& curve);

}  // namespace morrey
