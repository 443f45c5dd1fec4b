#include "agentarch/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "agentarch/dsl.hpp"
#include "agentarch/errors.hpp"
#include "corpus_embedded.hpp"

namespace agentarch {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

const std::map<std::string, Architecture>& arch_map() {
  static const std::map<std::string, Architecture> m = [] {
    std::map<std::string, Architecture> out;
    for (const std::string& n : builtin_names()) {
      const std::string path = "corpus/" + lower(n) + ".arch";
      out.emplace(n, parse_architecture(detail::embedded_corpus().at(path), path));
    }
    return out;
  }();
  return m;
}

const std::map<std::string, ArchMorphism>& morphism_map() {
  static const std::map<std::string, ArchMorphism> m = [] {
    std::map<std::string, ArchMorphism> out;
    for (const std::string& n : builtin_morphism_names()) {
      const std::string path = "corpus/" + n + ".morph";
      MorphismFile f = parse_morphism_file(detail::embedded_corpus().at(path), path);
      out.emplace(n, resolve_morphism(f, builtin(f.source), builtin(f.target)));
    }
    return out;
  }();
  return m;
}

// Supported carrier types: distinct syntax types with at least one knowledge
// partner, in declaration order.
std::vector<TypeSymbol> supported_carriers(const Architecture& a) {
  std::vector<TypeSymbol> out;
  for (const TypeSymbol& t : a.syn.types) {
    bool supported = false;
    for (const auto& [s, k] : a.iface.support) supported = supported || s == t;
    if (supported) out.push_back(t);
  }
  return out;
}

std::string display_of(const Architecture& a, const TypeSymbol& t) {
  auto it = a.display.find(t.name);
  return it == a.display.end() ? t.name : it->second;
}

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (const std::string& x : xs) out += (out.empty() ? "" : sep) + x;
  return out;
}

// --- stored comparison table -------------------------------------------
// Verbatim cells for the three tabulated architectures; dimensions in
// presentation order. Feedback structure and interface typing are recomputed
// from the artifacts by compare() and stored here only for reference.

struct TableRow {
  const char* dimension;
  const char* rl;
  const char* crl;
  const char* sbl;
};

constexpr TableRow kComparisonTable[] = {
    {"Persistent information structure", "Undifferentiated carrier Θ", "(Θ_π, Θ_CS)",
     "Family of schemas Σ"},
    {"Feedback structure", "Single endomorphic loop", "Two coupled endomorphic loops",
     "Multiple decoupled loops"},
    {"Causal structure", "Not represented", "Explicit causal model", "Modular causal schemas"},
    {"Information reuse", "Not supported", "Restricted", "Compositional and reusable"},
    {"Continual learning support", "Limited", "Partial", "Architectural"},
    {"Interface typing", "Monolithic", "Weakly typed", "Strongly typed and factored"},
    {"Body-Mind mediation", "None", "None", "Explicit architectural layer"},
    {"Locality of updates", "Global", "Role-based", "Schema-local"},
};

const char* table_cell(const TableRow& row, const std::string& name) {
  if (name == "RL") return row.rl;
  if (name == "CRL") return row.crl;
  if (name == "SBL") return row.sbl;
  return nullptr;
}

std::string carrier_list(const Architecture& a) {
  std::vector<std::string> names;
  for (const TypeSymbol& t : supported_carriers(a)) names.push_back(display_of(a, t));
  return names.empty() ? "(no supported carriers)" : join(names, ", ");
}

std::string loop_cell(const AnalysisReport& r) {
  return std::to_string(r.total_loops) +
         (r.total_loops == 1 ? " endomorphic loop" : " endomorphic loops");
}

std::string typing_cell(const AnalysisReport& r) {
  return std::to_string(r.modularity.supported_pairs) + " supported pairs over " +
         std::to_string(r.modularity.knowledge_carrier_types) + " knowledge carrier types";
}

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"RL",    "CRL",   "STEP1", "STEP2", "STEP3",
                                                 "STEP4", "STEP5", "SBL",   "AIXI"};
  return names;
}

const Architecture& builtin(const std::string& name) {
  const auto& m = arch_map();
  auto it = m.find(name);
  if (it == m.end())
    throw unknown_name("no builtin architecture '" + name + "' (one of: " +
                       join(builtin_names(), ", ") + ")");
  return it->second;
}

const std::vector<std::string>& builtin_morphism_names() {
  static const std::vector<std::string> names = {
      "rl_to_crl",      "rl_to_step1",    "step1_to_step2", "step2_to_step3",
      "step3_to_step4", "step4_to_step5", "step5_to_sbl"};
  return names;
}

const ArchMorphism& builtin_morphism(const std::string& name) {
  const auto& m = morphism_map();
  auto it = m.find(name);
  if (it == m.end())
    throw unknown_name("no builtin morphism '" + name + "' (one of: " +
                       join(builtin_morphism_names(), ", ") + ")");
  return it->second;
}

const std::map<std::string, std::string>& corpus_sources() { return detail::embedded_corpus(); }

std::vector<LadderStep> ladder() {
  static const std::vector<std::pair<std::string, std::string>> chain = {
      {"RL", "STEP1"},    {"STEP1", "STEP2"}, {"STEP2", "STEP3"},
      {"STEP3", "STEP4"}, {"STEP4", "STEP5"}, {"STEP5", "SBL"}};
  std::vector<LadderStep> steps;
  for (const auto& [src, tgt] : chain)
    steps.push_back({&builtin(src), &builtin(tgt),
                     &builtin_morphism(lower(src) + "_to_" + lower(tgt))});
  return steps;
}

AnalysisReport analyze(const Architecture& a) {
  AnalysisReport r;
  r.name = a.name;
  r.loop_report = og_loop_carriers(a.pattern.diagram, supported_carriers(a));
  for (const auto& [carrier, count] : r.loop_report.cycle_count_per_carrier)
    r.total_loops += count;
  r.support_table = render_support_table(a);
  r.generator_partition = knowledge_compatible_generators(a);
  r.modularity = modularity_report(a);
  for (const Constraint& c : a.constraints)
    r.constraints.push_back({c.id, c.kind, constraint_kind_info(c.kind).evaluable});
  for (const GeneratorSymbol& g : a.syn.generators)
    if (g.dom.empty()) r.zero_input_generators.push_back(g.name);
  for (const GeneratorSymbol& g : a.know.generators)
    if (g.dom.empty()) r.zero_input_generators.push_back(g.name);
  return r;
}

AnalysisReport analyze(const std::string& builtin_name) { return analyze(builtin(builtin_name)); }

std::string render_analysis(const AnalysisReport& r) {
  std::ostringstream os;
  os << "architecture " << r.name << "\n";
  os << "endomorphic loops: " << r.total_loops;
  if (!r.loop_report.carriers_on_cycles.empty()) {
    std::vector<std::string> parts;
    for (const TypeSymbol& t : r.loop_report.carriers_on_cycles)
      parts.push_back(t.name + ": " +
                      std::to_string(r.loop_report.cycle_count_per_carrier.at(t)));
    os << " (" << join(parts, ", ") << ")";
  }
  os << "\n";
  os << "support table:\n" << r.support_table;
  os << "knowledge-compatible generators: "
     << (r.generator_partition.compatible.empty() ? "(none)"
                                                  : join(r.generator_partition.compatible, ", "))
     << "\n";
  os << "knowledge-agnostic generators: "
     << (r.generator_partition.agnostic.empty() ? "(none)"
                                                : join(r.generator_partition.agnostic, ", "))
     << "\n";
  os << "supported pairs: " << r.modularity.supported_pairs
     << ", knowledge carrier types: " << r.modularity.knowledge_carrier_types << "\n";
  os << "constraints: " << r.constraints.size() << "\n";
  for (const auto& e : r.constraints)
    os << "  " << e.id << " (" << to_string(e.kind) << ", "
       << (e.evaluable ? "evaluable" : "not evaluable") << ")\n";
  if (!r.zero_input_generators.empty())
    os << "zero-input generators: " << join(r.zero_input_generators, ", ") << "\n";
  return os.str();
}

std::vector<ComparisonRow> compare(const Architecture& a, const Architecture& b) {
  const AnalysisReport ra = analyze(a), rb = analyze(b);
  const bool tabulated = table_cell(kComparisonTable[0], a.name) != nullptr &&
                         table_cell(kComparisonTable[0], b.name) != nullptr;
  std::vector<ComparisonRow> rows;
  for (const TableRow& t : kComparisonTable) {
    ComparisonRow row;
    row.dimension = t.dimension;
    const std::string dim = t.dimension;
    if (dim == "Feedback structure") {
      row.value_a = loop_cell(ra);
      row.value_b = loop_cell(rb);
      row.computed = true;
    } else if (dim == "Interface typing") {
      row.value_a = typing_cell(ra);
      row.value_b = typing_cell(rb);
      row.computed = true;
    } else if (tabulated) {
      row.value_a = table_cell(t, a.name);
      row.value_b = table_cell(t, b.name);
      row.computed = false;
    } else if (dim == "Persistent information structure") {
      row.value_a = carrier_list(a);
      row.value_b = carrier_list(b);
      row.computed = true;
    } else {
      row.value_a = row.value_b = "(not tabulated)";
      row.computed = true;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ComparisonRow> compare(const std::string& a, const std::string& b) {
  return compare(builtin(a), builtin(b));
}

std::string render_comparison(const std::string& name_a, const std::string& name_b,
                              const std::vector<ComparisonRow>& rows) {
  std::ostringstream os;
  os << "comparison: " << name_a << " vs " << name_b << "\n";
  for (const ComparisonRow& r : rows) {
    os << r.dimension << " [" << (r.computed ? "computed" : "quoted") << "]\n";
    os << "  " << name_a << ": " << r.value_a << "\n";
    os << "  " << name_b << ": " << r.value_b << "\n";
  }
  return os.str();
}

}  // namespace agentarch
