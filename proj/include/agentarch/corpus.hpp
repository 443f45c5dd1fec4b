#pragma once

#include <map>
#include <string>
#include <vector>

#include "agentarch/archcat.hpp"

namespace agentarch {

// Structural census of one architecture: endomorphic feedback loops through
// the supported carrier types, the rendered support matrix, the
// knowledge-compatible generator partition, headline modularity counts, and
// the constraint inventory.
struct AnalysisReport {
  std::string name;
  LoopReport loop_report;  // carriers = supported syntax types, declaration order
  int total_loops = 0;
  std::string support_table;
  GeneratorPartition generator_partition;
  ModularityReport modularity;
  struct ConstraintEntry {
    std::string id;
    ConstraintKind kind = ConstraintKind::Unchecked;
    bool evaluable = false;
  };
  std::vector<ConstraintEntry> constraints;  // declaration order
  // Generators (either layer) with an empty input profile; these consume
  // nothing and deserve a highlight in reports.
  std::vector<std::string> zero_input_generators;
};

// One row of an architecture comparison. `computed` rows are derived from the
// artifacts themselves; the rest quote the stored comparison table (available
// for RL, CRL and SBL only).
struct ComparisonRow {
  std::string dimension;
  std::string value_a, value_b;
  bool computed = false;
};

// Built-in corpus, parsed once from DSL sources embedded at build time.
// Architecture names: RL, CRL, STEP1..STEP5, SBL, AIXI.
const std::vector<std::string>& builtin_names();
const Architecture& builtin(const std::string& name);  // throws UnknownName

// Built-in morphisms: rl_to_crl plus the six ladder steps.
const std::vector<std::string>& builtin_morphism_names();
const ArchMorphism& builtin_morphism(const std::string& name);  // throws UnknownName

// Raw embedded DSL text keyed by repo-relative path ("corpus/rl.arch").
const std::map<std::string, std::string>& corpus_sources();

// The embedding chain RL -> STEP1 -> ... -> STEP5 -> SBL. Pointers reference
// the corpus singletons and stay valid for the process lifetime.
struct LadderStep {
  const Architecture* source = nullptr;
  const Architecture* target = nullptr;
  const ArchMorphism* morphism = nullptr;
};
std::vector<LadderStep> ladder();

AnalysisReport analyze(const Architecture& a);
AnalysisReport analyze(const std::string& builtin_name);
std::string render_analysis(const AnalysisReport& r);

// Eight fixed dimensions. Feedback structure and interface typing are always
// computed; the remaining six quote the stored table when both endpoints have
// a column there and otherwise fall back to computed summaries.
std::vector<ComparisonRow> compare(const Architecture& a, const Architecture& b);
std::vector<ComparisonRow> compare(const std::string& a, const std::string& b);
std::string render_comparison(const std::string& name_a, const std::string& name_b,
                              const std::vector<ComparisonRow>& rows);

}  // namespace agentarch
