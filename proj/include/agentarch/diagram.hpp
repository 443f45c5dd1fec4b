#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

namespace agentarch {

// A named object of a free hypergraph category.
struct TypeSymbol {
  std::string name;

  TypeSymbol() = default;
  TypeSymbol(std::string n) : name(std::move(n)) {}
  TypeSymbol(const char* n) : name(n) {}

  auto operator<=>(const TypeSymbol&) const = default;
};

using TypeProfile = std::vector<TypeSymbol>;

// A generating morphism: name plus ordered domain/codomain type lists.
struct GeneratorSymbol {
  std::string name;
  TypeProfile dom, cod;

  auto operator<=>(const GeneratorSymbol&) const = default;
};

using WireId = int;
using EdgeId = int;

// A labeled hyperedge. Port order is significant: in_ports[i] must carry
// label.dom[i], out_ports[j] must carry label.cod[j].
struct DiagramEdge {
  GeneratorSymbol label;
  std::vector<WireId> in_ports, out_ports;
};

// Morphism of a free hypergraph category, combinatorially: typed wires,
// labeled hyperedges with ordered ports, and ordered boundary lists.
// The Frobenius structure is absorbed by the representation — a wire may
// touch any number of ports and appear at any number of boundary slots, so
// spiders are just shared wires and spider fusion happens automatically
// when composition identifies wires.
struct OpenHypergraph {
  std::vector<TypeSymbol> wires;        // wire id -> type
  std::vector<DiagramEdge> edges;       // edge id -> edge
  std::vector<WireId> boundary_in, boundary_out;

  TypeProfile boundary_in_types() const;
  TypeProfile boundary_out_types() const;
  // Structural well-formedness: port/boundary ids in range, port types
  // match edge labels. Throws Error on violation; used by constructors
  // and the DSL, cheap enough to call defensively.
  void check() const;
};

// Canonical relabeling plus a certificate string. Certificates are equal
// iff the diagrams are isomorphic respecting types, labels, port orders and
// boundary orders.
struct CanonicalForm {
  OpenHypergraph diagram;
  std::string certificate;
};

// Report of directed feedback loops through designated carrier types.
// A cycle is attributed to a carrier type T only when every wire on the
// cycle has type T (an endomorphic loop on the carrier); mixed-type cycles
// are not loops "of" any carrier.
struct LoopReport {
  std::vector<TypeSymbol> carriers_on_cycles;      // sorted, count > 0
  std::map<TypeSymbol, int> cycle_count_per_carrier;  // every requested carrier
};

OpenHypergraph og_identity(const TypeProfile& profile);
OpenHypergraph og_generator(const GeneratorSymbol& g);
// Single-wire spider with m input legs and n output legs (copy = (1,2),
// merge = (2,1), unit = (0,1), counit = (1,0), cap = (2,0), cup = (0,2)).
OpenHypergraph og_spider(const TypeSymbol& t, int m, int n);
OpenHypergraph og_symmetry(const TypeProfile& p, const TypeProfile& q);

// Sequential composition f ; g, gluing f's out boundary to g's in boundary
// positionwise. Throws BoundaryTypeMismatch with the offending position.
OpenHypergraph og_compose(const OpenHypergraph& f, const OpenHypergraph& g);
OpenHypergraph og_tensor(const OpenHypergraph& f, const OpenHypergraph& g);

// Quotient d by identifying the wires in each pair (types must agree).
// Used by substitution and by tests that wire diagrams together directly.
OpenHypergraph og_identify_wires(const OpenHypergraph& d,
                                 const std::vector<std::pair<WireId, WireId>>& pairs);

CanonicalForm og_canonical(const OpenHypergraph& d);
bool og_equal(const OpenHypergraph& a, const OpenHypergraph& b);

LoopReport og_loop_carriers(const OpenHypergraph& d, const std::vector<TypeSymbol>& carriers);

// Debug/inspection rendering (Graphviz).
std::string og_to_dot(const OpenHypergraph& d, const std::string& name = "diagram");

}  // namespace agentarch
