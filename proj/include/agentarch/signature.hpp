#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "agentarch/diagram.hpp"
#include "agentarch/verdict.hpp"

namespace agentarch {

// A finitely presented hypergraph signature: declared types, declared
// generators, and optional user equations between diagrams. Equations
// beyond the structural (Frobenius/symmetric-monoidal) ones are stored and
// reported on, never used for rewriting.
struct HypergraphPresentation {
  std::vector<TypeSymbol> types;            // declaration order preserved
  std::vector<GeneratorSymbol> generators;  // declaration order preserved
  std::vector<std::pair<OpenHypergraph, OpenHypergraph>> equations;

  bool has_type(const TypeSymbol& t) const;
  const GeneratorSymbol* find_generator(std::string_view name) const;
};

// A distinguished diagram over a presentation, closed under structural
// rearrangement: identity padding and spider/symmetry layers on either side.
struct SyntaxPattern {
  OpenHypergraph diagram;
};

enum class Membership { member, non_member, unknown };

const char* to_string(Membership m);

// Checks: type/generator name uniqueness, generator profiles over declared
// types, equation sides well-typed over the presentation with matching
// boundary profiles. Equation sides already equal as diagrams are noted in
// the evidence (informational).
Verdict presentation_validate(const HypergraphPresentation& p);

// Appends failures to v when d mentions types or generator labels that the
// presentation does not declare (labels must match declared profiles).
Verdict& check_diagram_over(Verdict& v, const OpenHypergraph& d, const HypergraphPresentation& p,
                            const std::string& where);

// Is d the pattern up to structural rearrangement? Conservative
// three-valued answer:
//   non_member  — generator label multisets differ (d cannot be a single
//                 structural dressing of the pattern);
//   member      — d is og_equal to some L_pre ; (pattern ⊗ id[..]) ; L_post
//                 with structural (spider/symmetry) layers L;
//   unknown     — same generator multiset but no such dressing found.
// Throws UndeclaredSymbol if d uses labels/types outside the presentation.
Membership pattern_membership(const OpenHypergraph& d, const SyntaxPattern& g,
                              const HypergraphPresentation& p);

// Exhaustive up to og_equal within explicit structural bounds: all diagrams
// reachable from the presentation's generators, identities and small spiders
// (legs <= 2 per side) by at most `rounds` pairwise tensor/compose steps,
// with at most max_edges generator uses and at most max_wires wires.
// Deterministic order (sorted by canonical certificate). Intended as a
// property-test generator, not a complete enumeration of the free category.
std::vector<OpenHypergraph> enumerate_small_diagrams(const HypergraphPresentation& p,
                                                     int max_edges, int max_wires = 8,
                                                     int rounds = 2);

// --- structural padding constructors (used by membership tests) -----------

// pattern ⊗ id[extra] or id[extra] ⊗ pattern.
OpenHypergraph pad_with_identities(const OpenHypergraph& d, const TypeProfile& extra,
                                   bool pattern_first);
// Pre/post-compose with a boundary permutation built from symmetries.
OpenHypergraph permute_boundaries(const OpenHypergraph& d, const std::vector<int>& in_perm,
                                  const std::vector<int>& out_perm);

}  // namespace agentarch
