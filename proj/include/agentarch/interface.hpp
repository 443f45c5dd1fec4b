#pragma once

#include <map>
#include <string>
#include <vector>

#include "agentarch/diagram.hpp"

namespace agentarch {

struct Architecture;  // defined in archcat.hpp

// Boolean relational interface between a syntax layer and a knowledge layer:
// which knowledge types stand behind which syntax types, plus optional
// designated knowledge-layer diagrams for syntax generators.
struct RelationalInterface {
  // (syntax type, knowledge type) pairs, declaration order preserved.
  std::vector<std::pair<TypeSymbol, TypeSymbol>> support;
  // syntax generator name -> diagram over the knowledge presentation.
  std::map<std::string, OpenHypergraph> bindings;

  bool pair_supported(const TypeSymbol& s, const TypeSymbol& k) const;
};

// Is the tensor of syntax types xs supported against knowledge type k?
// Tensors extend existentially: supported iff some factor is paired with k.
// The empty tensor is supported against nothing. Throws UndeclaredSymbol for
// names outside the architecture's presentations.
bool support_lookup(const Architecture& arch, const TypeProfile& xs, const TypeSymbol& k);

// Partition of the syntax generators: `compatible` iff both the dom tensor
// and the cod tensor touch supported knowledge territory (some factor of
// each has a supported partner); everything else is `agnostic`.
struct GeneratorPartition {
  std::vector<std::string> compatible, agnostic;  // declaration order
};
GeneratorPartition knowledge_compatible_generators(const Architecture& arch);

// Headline modularity counts plus the rendered support table.
struct ModularityReport {
  int knowledge_carrier_types = 0;  // knowledge types with >= 1 supported pair
  int supported_pairs = 0;
  std::string support_table;  // fixed-width text matrix, see render_support_table
};
ModularityReport modularity_report(const Architecture& arch);

// Deterministic text rendering of the support matrix: one column per syntax
// type and one row per knowledge type, both in declaration order; '+' for a
// supported pair, '-' otherwise.
std::string render_support_table(const Architecture& arch);

}  // namespace agentarch
