#include "qsm/report.hpp"

#include <algorithm>
#include <sstream>

namespace qsm {

Json report_envelope(const std::string& command) {
  Json j;
  j["schema_version"] = 1;
  j["tool"] = "qsm";
  j["command"] = command;
  j["inputs"] = Json::object();
  j["warnings"] = Json::array();
  j["results"] = Json::object();
  return j;
}

std::string report_dump(const Json& report) { return report.dump(2) + "\n"; }

Json generator_table(const FreeCDGA& A) {
  std::vector<int> order;
  for (const Generator& g : A.T.gens) order.push_back(g.id);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return A.T.degree(a) < A.T.degree(b);
  });
  Json rows = Json::array();
  for (int id : order) {
    Json row;
    row["name"] = A.T.name(id);
    row["degree"] = A.T.degree(id);
    auto it = A.diff.find(id);
    row["differential"] = (it == A.diff.end() || poly_is_zero(it->second))
                              ? "0"
                              : poly_to_string(A.T, it->second);
    rows.push_back(std::move(row));
  }
  return rows;
}

Json rank_rows(const std::vector<int>& per_degree, int first_degree) {
  Json rows = Json::array();
  for (std::size_t n = static_cast<std::size_t>(first_degree);
       n < per_degree.size(); ++n) {
    Json row;
    row["degree"] = static_cast<int>(n);
    row["rank"] = per_degree[n];
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

Json opt_int_or_infinity(const std::optional<int>& v) {
  if (v) return *v;
  return "infinity";
}

}  // namespace

Json split_check_json(const SplitCheck& r) {
  Json j;
  j["status"] = to_string(r.status);
  j["class_zero"] = r.class_zero;
  j["bracket_length"] = opt_int_or_infinity(r.bracket_len);
  j["d1_depth"] = r.depth;
  j["whitehead_length"] = r.whitehead;
  j["truncation"] = r.truncation;
  j["checked_up_to"] = r.checked_up_to;
  j["certified_nonsplit"] = r.certified_nonsplit;
  if (!r.nonsplit_reason.empty()) j["nonsplit_reason"] = r.nonsplit_reason;
  if (!r.c_alpha.empty()) j["cone_cycle"] = r.c_alpha;
  j["nonzero_tails"] = r.nonzero_tails;
  j["base_degrees"] = r.base_degrees;
  j["total_degrees"] = r.total_degrees;
  j["factor_degrees"] = r.factor_degrees;
  j["transcript"] = r.transcript;
  return j;
}

Json decomposition_json(const Decomposition& d) {
  Json j;
  j["d1_depth"] = d.depth;
  j["all_split"] = d.all_split;
  Json stages = Json::array();
  for (const CellStage& s : d.stages) {
    Json row;
    row["name"] = s.name;
    row["cell"] = s.cell_dim;
    row["class_zero"] = s.class_zero;
    row["bracket_length"] = opt_int_or_infinity(s.bracket_len);
    row["splits"] = s.splits;
    stages.push_back(std::move(row));
  }
  j["stages"] = std::move(stages);
  Json cells = Json::object();
  for (const auto& [dim, count] : d.cells_per_dim)
    cells[std::to_string(dim)] = count;
  j["cells_per_dim"] = std::move(cells);
  j["predicted_ranks"] = rank_rows(d.predicted_ranks, 1);
  j["reduction_ranks"] = rank_rows(d.reduction_ranks, 1);
  j["ranks_match"] = d.ranks_match;
  return j;
}

// ------------------------------------------------------------ text view ----

namespace {

bool scalar(const Json& v) { return !v.is_object() && !v.is_array(); }

std::string scalar_str(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// Array of flat objects with shared keys renders as an aligned table.
bool tabular(const Json& arr) {
  if (!arr.is_array() || arr.empty()) return false;
  for (const Json& row : arr) {
    if (!row.is_object() || row.empty()) return false;
    for (const auto& [k, v] : row.items()) {
      (void)k;
      if (!scalar(v)) return false;
    }
  }
  return true;
}

void render_value(std::ostringstream& os, const std::string& key,
                  const Json& v, int indent);

void render_table(std::ostringstream& os, const Json& arr, int indent) {
  std::vector<std::string> cols;
  for (const Json& row : arr)
    for (const auto& [k, v] : row.items()) {
      (void)v;
      if (std::find(cols.begin(), cols.end(), k) == cols.end())
        cols.push_back(k);
    }
  std::vector<std::size_t> width(cols.size());
  std::vector<std::vector<std::string>> cells;
  for (std::size_t c = 0; c < cols.size(); ++c)
    width[c] = cols[c].size();
  for (const Json& row : arr) {
    std::vector<std::string> line(cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (row.contains(cols[c])) line[c] = scalar_str(row[cols[c]]);
      width[c] = std::max(width[c], line[c].size());
    }
    cells.push_back(std::move(line));
  }
  std::string pad(static_cast<std::size_t>(indent), ' ');
  os << pad;
  for (std::size_t c = 0; c < cols.size(); ++c)
    os << (c ? "  " : "") << cols[c]
       << std::string(width[c] - cols[c].size(), ' ');
  os << "\n";
  for (const auto& line : cells) {
    os << pad;
    for (std::size_t c = 0; c < cols.size(); ++c)
      os << (c ? "  " : "") << line[c]
         << std::string(width[c] - line[c].size(), ' ');
    os << "\n";
  }
}

void render_value(std::ostringstream& os, const std::string& key,
                  const Json& v, int indent) {
  std::string pad(static_cast<std::size_t>(indent), ' ');
  if (scalar(v)) {
    os << pad << key << ": " << scalar_str(v) << "\n";
    return;
  }
  if (v.is_array()) {
    if (v.empty()) {
      os << pad << key << ": (none)\n";
      return;
    }
    if (tabular(v)) {
      os << pad << key << ":\n";
      render_table(os, v, indent + 2);
      return;
    }
    bool all_scalar = std::all_of(v.begin(), v.end(),
                                  [](const Json& e) { return scalar(e); });
    if (all_scalar) {
      os << pad << key << ":";
      for (const Json& e : v) os << " " << scalar_str(e);
      os << "\n";
      return;
    }
    os << pad << key << ":\n";
    int i = 0;
    for (const Json& e : v)
      render_value(os, "[" + std::to_string(i++) + "]", e, indent + 2);
    return;
  }
  // object
  if (v.empty()) {
    os << pad << key << ": (none)\n";
    return;
  }
  os << pad << key << ":\n";
  for (const auto& [k, e] : v.items()) render_value(os, k, e, indent + 2);
}

}  // namespace

std::string render_text(const Json& report) {
  std::ostringstream os;
  os << report.value("tool", "qsm") << " "
     << report.value("command", "?") << "\n";
  if (report.contains("inputs") && !report["inputs"].empty()) {
    os << "inputs:";
    for (const auto& [k, v] : report["inputs"].items())
      os << " " << k << "=" << scalar_str(v);
    os << "\n";
  }
  if (report.contains("warnings"))
    for (const Json& w : report["warnings"])
      os << "warning: " << scalar_str(w) << "\n";
  if (report.contains("results"))
    for (const auto& [k, v] : report["results"].items())
      render_value(os, k, v, 0);
  return os.str();
}

// -------------------------------------------------------------- schema -----

namespace {

// Kept byte-identical with share/report-schema.json (verified by tests).
const char kSchema[] = R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "$id": "qsm-report.schema.json",
  "title": "qsm report",
  "description": "Envelope emitted by every qsm command in JSON mode. Rationals are canonical 'p/q' strings; every value is exact; reports carry no timestamps.",
  "version": 1,
  "type": "object",
  "required": ["schema_version", "tool", "command", "inputs", "warnings", "results"],
  "additionalProperties": false,
  "properties": {
    "schema_version": { "type": "integer", "enum": [1] },
    "tool": { "type": "string", "enum": ["qsm"] },
    "command": {
      "type": "string",
      "enum": ["analyze", "map-model", "split-check", "decompose", "selftest"]
    },
    "inputs": { "type": "object" },
    "warnings": { "type": "array", "items": { "type": "string" } },
    "results": { "type": "object" }
  }
}
)";

bool type_matches(const Json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  return false;
}

bool check_schema(const Json& v, const Json& sch, const std::string& path,
                  std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = (path.empty() ? "$" : path) + ": " + m;
    return false;
  };
  if (sch.contains("type") &&
      !type_matches(v, sch["type"].get<std::string>()))
    return fail("expected type " + sch["type"].get<std::string>());
  if (sch.contains("enum")) {
    bool hit = false;
    for (const Json& e : sch["enum"])
      if (e == v) {
        hit = true;
        break;
      }
    if (!hit) return fail("value not in enum");
  }
  if (v.is_object()) {
    if (sch.contains("required"))
      for (const Json& r : sch["required"])
        if (!v.contains(r.get<std::string>()))
          return fail("missing required member '" + r.get<std::string>() + "'");
    const Json* props = sch.contains("properties") ? &sch["properties"] : nullptr;
    for (const auto& [k, e] : v.items()) {
      if (props && props->contains(k)) {
        if (!check_schema(e, (*props)[k], path + "." + k, why)) return false;
      } else if (sch.contains("additionalProperties") &&
                 sch["additionalProperties"].is_boolean() &&
                 !sch["additionalProperties"].get<bool>()) {
        return fail("unexpected member '" + k + "'");
      }
    }
  }
  if (v.is_array() && sch.contains("items")) {
    int i = 0;
    for (const Json& e : v) {
      if (!check_schema(e, sch["items"], path + "[" + std::to_string(i) + "]",
                        why))
        return false;
      ++i;
    }
  }
  return true;
}

}  // namespace

const std::string& report_schema() {
  static const std::string s(kSchema);
  return s;
}

bool validate_report(const Json& report, std::string* why) {
  static const Json sch = Json::parse(kSchema);
  return check_schema(report, sch, "", why);
}

}  // namespace qsm
