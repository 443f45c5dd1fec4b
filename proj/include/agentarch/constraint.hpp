#pragma once

#include <map>
#include <string>
#include <vector>

#include "agentarch/verdict.hpp"

namespace agentarch {

struct Architecture;  // defined in archcat.hpp

enum class ConstraintKind {
  Representability,       // carrier realized with the declared tabular shape
  FixedPoint,             // learned object near the Bellman fixed point
  PolicyValueCompat,      // declared policy is greedy for the carrier values
  MarkovFactorization,    // interaction kernel depends only on declared inputs
  OntologicalFactorization,  // a type's realization factors as declared
  Unchecked,              // prose-only restriction, never evaluable
};

const char* to_string(ConstraintKind k);

// A reference into an architecture's symbol spaces. `Auto` refs resolve by
// name search across all spaces (a name may legitimately live in several).
struct SymbolRef {
  enum class Space { Auto, SynType, KnowType, SynGen, KnowGen, Pair };
  Space space = Space::Auto;
  std::string name;
  std::string name2;  // Pair only: (name, name2) = (syntax type, knowledge type)

  auto operator<=>(const SymbolRef&) const = default;
};

struct ScopeRef {
  std::vector<SymbolRef> refs;
};

struct Constraint {
  std::string id;
  ConstraintKind kind = ConstraintKind::Unchecked;
  ScopeRef scope;
  std::map<std::string, std::string> params;  // kind-specific, values kept textual
};

// A scope ref resolved against a concrete architecture: every space the
// name was found in.
struct ResolvedRef {
  SymbolRef ref;
  std::vector<SymbolRef::Space> hits;  // concrete spaces, nonempty
};

// Resolves each ref; throws UnknownRef naming the first unresolvable symbol.
std::vector<ResolvedRef> scope_resolve(const Architecture& arch, const ScopeRef& scope);

// Registry of evaluable constraint kinds and their parameter contracts.
struct ConstraintKindInfo {
  ConstraintKind kind;
  std::string keyword;  // DSL keyword
  std::vector<std::string> required_params;
  std::vector<std::string> optional_params;
  bool evaluable = true;
};
const std::vector<ConstraintKindInfo>& constraint_registry_list();
const ConstraintKindInfo& constraint_kind_info(ConstraintKind k);

// Checks id uniqueness, scope resolution and parameter completeness for
// every constraint of the architecture.
Verdict constraints_validate(const Architecture& arch);

}  // namespace agentarch
