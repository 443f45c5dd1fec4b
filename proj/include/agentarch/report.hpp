#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "agentarch/corpus.hpp"
#include "agentarch/verdict.hpp"

namespace agentarch {

using Json = nlohmann::json;

Json verdict_to_json(const Verdict& v);
Json analysis_to_json(const AnalysisReport& r);
Json comparison_to_json(const std::string& name_a, const std::string& name_b,
                        const std::vector<ComparisonRow>& rows);

// Uniform CLI report envelope. Status is the blocking combination of the item
// statuses (not_evaluable never blocks); exit_code follows the CLI contract
// (0 pass, 1 fail, 2 error).
struct ReportItem {
  std::string name;
  Verdict verdict;
};
Json make_report(const std::string& command, const std::vector<ReportItem>& items,
                 Json data = Json::object());
Json error_report(const std::string& command, const std::string& kind,
                  const std::string& message);

// Validates `doc` against the subset of JSON Schema the shipped report schema
// uses (type, enum, required, properties, additionalProperties, items,
// minimum/maximum). Returns human-readable violations; empty means valid.
std::vector<std::string> schema_violations(const Json& schema, const Json& doc);

}  // namespace agentarch
