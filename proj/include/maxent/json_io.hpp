#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "maxent/expansion.hpp"
#include "maxent/oracle.hpp"
#include "maxent/problem.hpp"

namespace maxent {

using Json = nlohmann::json;

/// Serializes with every number printed as %.17g, so equal values always
/// produce equal bytes. Non-finite numbers become null.
std::string dump_json(const Json& doc, int indent = 2);

Json to_json(const Problem& p);
Json to_json(const AffineTransform& t);
Json to_json(const Normalization& n);
/// The table, plus the raw-to-normalized transform when given (used by eval --raw).
Json to_json(const CoefficientTable& table, const AffineTransform* transform = nullptr);
Json to_json(const ExactSolution& sol);
Json to_json(const CoefficientReport& report);
/// Wall time is only included on request: it would break byte-identical reruns.
Json to_json(const VerificationReport& report, bool include_wall_time = false);

struct StoredTable {
  CoefficientTable table;
  std::optional<AffineTransform> transform;
};

/// Reads a table document written by to_json(CoefficientTable). Throws DataError.
StoredTable table_from_json(const Json& doc);

/// Parses text as JSON, mapping parse failures to DataError.
Json parse_json(const std::string& text);

}  // namespace maxent
