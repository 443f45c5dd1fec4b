#pragma once

#include <map>
#include <string>
#include <vector>

#include "agentarch/constraint.hpp"
#include "agentarch/expr.hpp"
#include "agentarch/interface.hpp"
#include "agentarch/signature.hpp"
#include "agentarch/verdict.hpp"

namespace agentarch {

// An agent architecture: syntax presentation with a distinguished wiring
// pattern, knowledge presentation, relational interface between the two, and
// declared constraints.
struct Architecture {
  std::string name;
  HypergraphPresentation syn;
  SyntaxPattern pattern;
  DiagExprPtr pattern_expr;  // surface form for rendering, may be null
  HypergraphPresentation know;
  RelationalInterface iface;
  std::map<std::string, DiagExprPtr> binding_exprs;  // mirrors iface.bindings
  std::vector<Constraint> constraints;
  // ASCII symbol -> display glyph (e.g. Theta_s -> "Θ^s"); presentation data
  // stays ASCII, this is rendering sugar only.
  std::map<std::string, std::string> display;
};

// A morphism of architectures: symbol-to-symbol type maps plus
// generator-to-diagram maps for both layers (images live over the target).
struct ArchMorphism {
  std::string name, source, target;
  std::map<std::string, std::string> type_map_syn, type_map_know;  // by type name
  std::map<std::string, OpenHypergraph> gen_map_syn, gen_map_know;
  std::map<std::string, DiagExprPtr> gen_expr_syn, gen_expr_know;  // surface forms
};

// Both presentations validate, the pattern and every binding are well-typed,
// support pairs name declared types, constraints validate.
Verdict arch_validate(const Architecture& a);

// F : A -> B. Type maps total into B's types; every generator image is a
// valid diagram over B with boundary profile = mapped dom/cod; interface
// naturality: every supported pair of A maps to a supported pair of B.
// No coherence beyond these checks is demanded.
Verdict morphism_validate(const ArchMorphism& f, const Architecture& a, const Architecture& b);

// Map a diagram over A's syntax (resp. knowledge) layer through F by
// substituting generator images and renaming wire types.
OpenHypergraph apply_syn(const ArchMorphism& f, const OpenHypergraph& d);
OpenHypergraph apply_know(const ArchMorphism& f, const OpenHypergraph& d);

// (g ∘ f) : A -> C for f : A -> B, g : B -> C.
ArchMorphism morphism_compose(const ArchMorphism& g, const ArchMorphism& f);
ArchMorphism morphism_identity(const Architecture& a);

// Rename a constraint's scope and symbol-valued params along F. A generator
// ref transports to every generator label occurring in its image diagram
// (purely structural images contribute nothing).
Constraint constraint_transport(const ArchMorphism& f, const Architecture& a,
                                const Constraint& rho);

}  // namespace agentarch
