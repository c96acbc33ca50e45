#pragma once
// Structured result reports: a JSON envelope shared by every CLI command,
// serializer helpers for the library's result types, a plain-text rendering,
// and a validator for the shipped report schema.  All numeric payload is
// exact: rationals are emitted as canonical "p/q" strings, counts as
// integers.  Reports carry no timestamps; identical inputs produce
// byte-identical output.

#include <string>
#include <vector>

#include "json.hpp"
#include "qsm/cdga.hpp"
#include "qsm/split.hpp"

namespace qsm {

using Json = nlohmann::ordered_json;

// Envelope: {schema_version, tool, command, inputs{}, warnings[], results{}}.
Json report_envelope(const std::string& command);

// Canonical serialization: 2-space indent plus trailing newline.
std::string report_dump(const Json& report);

// Generator rows {name, degree, differential} sorted by (degree, id).
Json generator_table(const FreeCDGA& A);

// Rank rows {degree, rank} for per_degree[first_degree..], zeros included.
Json rank_rows(const std::vector<int>& per_degree, int first_degree);

// Serializers for the analysis verdict types.
Json split_check_json(const SplitCheck& r);
Json decomposition_json(const Decomposition& d);

// Human-readable rendering of a full report.
std::string render_text(const Json& report);

// The report schema (embedded copy of share/report-schema.json).
const std::string& report_schema();

// Validate against the embedded schema (type/required/properties/items/enum/
// additionalProperties subset).  On failure returns false and sets *why.
bool validate_report(const Json& report, std::string* why = nullptr);

}  // namespace qsm
