#include "agentarch/report.hpp"

#include "agentarch/constraint.hpp"

namespace agentarch {

Json verdict_to_json(const Verdict& v) {
  Json j;
  j["status"] = to_string(v.status);
  if (!v.residuals.empty()) j["residuals"] = v.residuals;
  if (!v.evidence.empty()) j["evidence"] = v.evidence;
  return j;
}

Json analysis_to_json(const AnalysisReport& r) {
  Json loops;
  loops["total"] = r.total_loops;
  Json per = Json::object();
  for (const auto& [t, n] : r.loop_report.cycle_count_per_carrier) per[t.name] = n;
  loops["per_carrier"] = per;
  Json on_cycles = Json::array();
  for (const TypeSymbol& t : r.loop_report.carriers_on_cycles) on_cycles.push_back(t.name);
  loops["carriers_on_cycles"] = on_cycles;

  Json constraints = Json::array();
  for (const auto& e : r.constraints)
    constraints.push_back(
        {{"id", e.id}, {"kind", to_string(e.kind)}, {"evaluable", e.evaluable}});

  return Json{{"name", r.name},
              {"loops", loops},
              {"support_table", r.support_table},
              {"compatible_generators", r.generator_partition.compatible},
              {"agnostic_generators", r.generator_partition.agnostic},
              {"supported_pairs", r.modularity.supported_pairs},
              {"knowledge_carrier_types", r.modularity.knowledge_carrier_types},
              {"constraints", constraints},
              {"zero_input_generators", r.zero_input_generators}};
}

Json comparison_to_json(const std::string& name_a, const std::string& name_b,
                        const std::vector<ComparisonRow>& rows) {
  Json out;
  out["a"] = name_a;
  out["b"] = name_b;
  Json jrows = Json::array();
  for (const ComparisonRow& r : rows)
    jrows.push_back({{"dimension", r.dimension},
                     {"a", r.value_a},
                     {"b", r.value_b},
                     {"source", r.computed ? "computed" : "quoted"}});
  out["rows"] = jrows;
  return out;
}

Json make_report(const std::string& command, const std::vector<ReportItem>& items, Json data) {
  Verdict::Status status = Verdict::Status::pass;
  Json jitems = Json::array();
  for (const ReportItem& item : items) {
    status = combine_blocking(status, item.verdict.status);
    Json j = verdict_to_json(item.verdict);
    j["name"] = item.name;
    jitems.push_back(std::move(j));
  }
  Json report;
  report["command"] = command;
  report["status"] = to_string(status);
  report["exit_code"] = status == Verdict::Status::fail ? 1 : 0;
  report["items"] = std::move(jitems);
  if (!data.empty()) report["data"] = std::move(data);
  return report;
}

Json error_report(const std::string& command, const std::string& kind,
                  const std::string& message) {
  Json report;
  report["command"] = command;
  report["status"] = "error";
  report["exit_code"] = 2;
  report["items"] = Json::array();
  report["error"] = Json{{"kind", kind}, {"message", message}};
  return report;
}

namespace {

const char* json_type_name(const Json& j) {
  if (j.is_object()) return "object";
  if (j.is_array()) return "array";
  if (j.is_string()) return "string";
  if (j.is_boolean()) return "boolean";
  if (j.is_number_integer() || j.is_number_unsigned()) return "integer";
  if (j.is_number()) return "number";
  return "null";
}

void validate_node(const Json& schema, const Json& doc, const std::string& path,
                   std::vector<std::string>& out) {
  if (schema.contains("type")) {
    const std::string want = schema["type"].get<std::string>();
    const std::string got = json_type_name(doc);
    const bool ok = want == got || (want == "number" && got == "integer");
    if (!ok) {
      out.push_back(path + ": expected " + want + ", got " + got);
      return;
    }
  }
  if (schema.contains("enum")) {
    bool hit = false;
    for (const Json& e : schema["enum"]) hit = hit || e == doc;
    if (!hit) out.push_back(path + ": value not in enum");
  }
  if (doc.is_number()) {
    if (schema.contains("minimum") && doc.get<double>() < schema["minimum"].get<double>())
      out.push_back(path + ": below minimum");
    if (schema.contains("maximum") && doc.get<double>() > schema["maximum"].get<double>())
      out.push_back(path + ": above maximum");
  }
  if (doc.is_object()) {
    if (schema.contains("required"))
      for (const Json& key : schema["required"])
        if (!doc.contains(key.get<std::string>()))
          out.push_back(path + ": missing required key '" + key.get<std::string>() + "'");
    const Json props = schema.value("properties", Json::object());
    for (const auto& [key, value] : doc.items()) {
      if (props.contains(key)) {
        validate_node(props[key], value, path + "." + key, out);
      } else if (schema.contains("additionalProperties")) {
        const Json& ap = schema["additionalProperties"];
        if (ap.is_boolean() && !ap.get<bool>())
          out.push_back(path + ": unexpected key '" + key + "'");
        else if (ap.is_object())
          validate_node(ap, value, path + "." + key, out);
      }
    }
  }
  if (doc.is_array() && schema.contains("items")) {
    int i = 0;
    for (const Json& element : doc)
      validate_node(schema["items"], element, path + "[" + std::to_string(i++) + "]", out);
  }
}

}  // namespace

std::vector<std::string> schema_violations(const Json& schema, const Json& doc) {
  std::vector<std::string> out;
  validate_node(schema, doc, "$", out);
  return out;
}

}  // namespace agentarch
