#include "agentarch/signature.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "agentarch/errors.hpp"

namespace agentarch {

bool HypergraphPresentation::has_type(const TypeSymbol& t) const {
  return std::find(types.begin(), types.end(), t) != types.end();
}

const GeneratorSymbol* HypergraphPresentation::find_generator(std::string_view name) const {
  for (const GeneratorSymbol& g : generators)
    if (g.name == name) return &g;
  return nullptr;
}

const char* to_string(Membership m) {
  switch (m) {
    case Membership::member: return "member";
    case Membership::non_member: return "non_member";
    default: return "unknown";
  }
}

Verdict& check_diagram_over(Verdict& v, const OpenHypergraph& d, const HypergraphPresentation& p,
                            const std::string& where) {
  for (const TypeSymbol& t : d.wires)
    if (!p.has_type(t)) {
      v.status = Verdict::Status::fail;
      v.note(where + ": wire type '" + t.name + "' is not declared");
    }
  for (const DiagramEdge& e : d.edges) {
    const GeneratorSymbol* g = p.find_generator(e.label.name);
    if (!g) {
      v.status = Verdict::Status::fail;
      v.note(where + ": edge label '" + e.label.name + "' is not a declared generator");
    } else if (*g != e.label) {
      v.status = Verdict::Status::fail;
      v.note(where + ": edge label '" + e.label.name + "' disagrees with the declared profile");
    }
  }
  return v;
}

Verdict presentation_validate(const HypergraphPresentation& p) {
  Verdict v = Verdict::passed();
  std::set<std::string> seen;
  for (const TypeSymbol& t : p.types) {
    if (t.name.empty()) {
      v.status = Verdict::Status::fail;
      v.note("empty type name");
    }
    if (!seen.insert(t.name).second) {
      v.status = Verdict::Status::fail;
      v.note("duplicate type '" + t.name + "'");
    }
  }
  std::set<std::string> gseen;
  for (const GeneratorSymbol& g : p.generators) {
    if (g.name.empty()) {
      v.status = Verdict::Status::fail;
      v.note("empty generator name");
    }
    if (!gseen.insert(g.name).second) {
      v.status = Verdict::Status::fail;
      v.note("duplicate generator '" + g.name + "'");
    }
    for (const TypeSymbol& t : g.dom)
      if (!p.has_type(t)) {
        v.status = Verdict::Status::fail;
        v.note("generator '" + g.name + "' dom uses undeclared type '" + t.name + "'");
      }
    for (const TypeSymbol& t : g.cod)
      if (!p.has_type(t)) {
        v.status = Verdict::Status::fail;
        v.note("generator '" + g.name + "' cod uses undeclared type '" + t.name + "'");
      }
  }
  for (size_t i = 0; i < p.equations.size(); ++i) {
    const auto& [lhs, rhs] = p.equations[i];
    std::string where = "equation " + std::to_string(i);
    check_diagram_over(v, lhs, p, where + " (lhs)");
    check_diagram_over(v, rhs, p, where + " (rhs)");
    if (lhs.boundary_in_types() != rhs.boundary_in_types() ||
        lhs.boundary_out_types() != rhs.boundary_out_types()) {
      v.status = Verdict::Status::fail;
      v.note(where + ": sides have different boundary profiles");
    } else if (og_equal(lhs, rhs)) {
      // Informational: the sides are already equal as diagrams, so the
      // equation is vacuous for this checker.
      v.note(where + ": sides already structurally equal");
    }
  }
  if (v.ok() && v.evidence.empty()) v.note("presentation well-formed");
  return v;
}

// ---------------------------------------------------------------------------
// Pattern membership.
//
// Any single structural dressing L_pre ; (P ⊗ id[E]) ; L_post has exactly P's
// edges; structural layers can merge or reroute only P's *boundary* wires
// (interior wires are untouchable). So d is such a dressing iff some
// label/port-preserving edge bijection induces a wire map P → d that (a) is
// single-valued, (b) merges only boundary wires of P, (c) sends interior
// wires off d's boundary, and (d) does not lose closed circles of P.
// Structural layers themselves compose, so deeper stacks add nothing.

namespace {

std::string edge_key(const GeneratorSymbol& g) {
  std::string key = g.name + "|";
  for (const TypeSymbol& t : g.dom) key += t.name + ",";
  key += "|";
  for (const TypeSymbol& t : g.cod) key += t.name + ",";
  return key;
}

bool try_bijection(const OpenHypergraph& d, const OpenHypergraph& pat,
                   const std::vector<int>& pat_to_d /* edge index map */) {
  const int INVALID = -2;
  std::vector<int> image(pat.wires.size(), -1);  // pattern wire -> d wire
  for (size_t pe = 0; pe < pat.edges.size(); ++pe) {
    const DiagramEdge& a = pat.edges[pe];
    const DiagramEdge& b = d.edges[static_cast<size_t>(pat_to_d[pe])];
    auto bind = [&](WireId pw, WireId dw) {
      if (image[pw] == -1)
        image[pw] = dw;
      else if (image[pw] != dw)
        image[pw] = INVALID;  // a pattern wire cannot split into two wires
    };
    for (size_t i = 0; i < a.in_ports.size(); ++i) bind(a.in_ports[i], b.in_ports[i]);
    for (size_t i = 0; i < a.out_ports.size(); ++i) bind(a.out_ports[i], b.out_ports[i]);
  }
  for (int im : image)
    if (im == INVALID) return false;

  std::vector<char> pat_boundary(pat.wires.size(), 0);
  for (WireId w : pat.boundary_in) pat_boundary[w] = 1;
  for (WireId w : pat.boundary_out) pat_boundary[w] = 1;
  std::vector<char> d_boundary(d.wires.size(), 0);
  for (WireId w : d.boundary_in) d_boundary[w] = 1;
  for (WireId w : d.boundary_out) d_boundary[w] = 1;

  // Fibers of the wire map: merging is only legal among boundary wires.
  std::map<int, std::vector<int>> fibers;
  for (size_t pw = 0; pw < pat.wires.size(); ++pw)
    if (image[pw] >= 0) fibers[image[pw]].push_back(static_cast<int>(pw));
  for (const auto& [dw, members] : fibers) {
    bool has_interior = false;
    for (int pw : members)
      if (!pat_boundary[pw]) has_interior = true;
    if (has_interior) {
      if (members.size() > 1) return false;   // interior wires cannot merge
      if (d_boundary[dw]) return false;        // or become externally visible
    }
  }

  // Closed circles of the pattern survive every dressing.
  auto circles = [](const OpenHypergraph& x, const std::vector<char>& on_boundary) {
    std::map<std::string, int> per_type;
    std::vector<char> touched(x.wires.size(), 0);
    for (const DiagramEdge& e : x.edges) {
      for (WireId w : e.in_ports) touched[w] = 1;
      for (WireId w : e.out_ports) touched[w] = 1;
    }
    for (size_t w = 0; w < x.wires.size(); ++w)
      if (!touched[w] && !on_boundary[w]) per_type[x.wires[w].name]++;
    return per_type;
  };
  auto pat_circles = circles(pat, pat_boundary);
  auto d_circles = circles(d, d_boundary);
  for (const auto& [t, n] : pat_circles)
    if (d_circles[t] < n) return false;

  return true;
}

}  // namespace

Membership pattern_membership(const OpenHypergraph& d, const SyntaxPattern& g,
                              const HypergraphPresentation& p) {
  for (const TypeSymbol& t : d.wires)
    if (!p.has_type(t)) throw undeclared_symbol("pattern_membership: type '" + t.name + "'");
  for (const DiagramEdge& e : d.edges) {
    const GeneratorSymbol* found = p.find_generator(e.label.name);
    if (!found || *found != e.label)
      throw undeclared_symbol("pattern_membership: generator '" + e.label.name + "'");
  }

  // Grouped edge indices by label; multiset mismatch is decisive.
  std::map<std::string, std::vector<int>> dgroups, pgroups;
  for (size_t i = 0; i < d.edges.size(); ++i) dgroups[edge_key(d.edges[i].label)].push_back(static_cast<int>(i));
  for (size_t i = 0; i < g.diagram.edges.size(); ++i)
    pgroups[edge_key(g.diagram.edges[i].label)].push_back(static_cast<int>(i));
  if (dgroups.size() != pgroups.size()) return Membership::non_member;
  for (const auto& [key, idx] : pgroups) {
    auto it = dgroups.find(key);
    if (it == dgroups.end() || it->second.size() != idx.size()) return Membership::non_member;
  }

  // Try every label-preserving edge bijection (per-group permutations).
  std::vector<std::pair<std::vector<int>, std::vector<int>>> groups;  // (pattern idx, d idx)
  for (const auto& [key, idx] : pgroups) groups.emplace_back(idx, dgroups[key]);

  std::vector<int> pat_to_d(g.diagram.edges.size(), -1);
  auto search = [&](auto&& self, size_t gi) -> bool {
    if (gi == groups.size()) return try_bijection(d, g.diagram, pat_to_d);
    auto& [pidx, didx] = groups[gi];
    std::vector<int> perm = didx;
    std::sort(perm.begin(), perm.end());
    do {
      for (size_t k = 0; k < pidx.size(); ++k) pat_to_d[static_cast<size_t>(pidx[k])] = perm[k];
      if (self(self, gi + 1)) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
  };
  if (search(search, 0)) return Membership::member;
  return Membership::unknown;
}

// ---------------------------------------------------------------------------

std::vector<OpenHypergraph> enumerate_small_diagrams(const HypergraphPresentation& p,
                                                     int max_edges, int max_wires, int rounds) {
  std::vector<OpenHypergraph> seeds;
  seeds.push_back(og_identity({}));  // empty diagram
  static const int spider_legs[][2] = {{0, 1}, {1, 0}, {1, 1}, {1, 2}, {2, 1}, {2, 0}, {0, 2}, {2, 2}};
  for (const TypeSymbol& t : p.types) {
    seeds.push_back(og_identity({t}));
    for (auto [m, n] : spider_legs) seeds.push_back(og_spider(t, m, n));
  }
  if (max_edges > 0)
    for (const GeneratorSymbol& g : p.generators) seeds.push_back(og_generator(g));

  auto admissible = [&](const OpenHypergraph& d) {
    return static_cast<int>(d.edges.size()) <= max_edges &&
           static_cast<int>(d.wires.size()) <= max_wires;
  };

  std::map<std::string, OpenHypergraph> all;
  std::vector<OpenHypergraph> frontier;
  for (const OpenHypergraph& s : seeds) {
    if (!admissible(s)) continue;
    auto canon = og_canonical(s);
    if (all.emplace(canon.certificate, canon.diagram).second) frontier.push_back(canon.diagram);
  }

  for (int r = 0; r < rounds; ++r) {
    std::vector<OpenHypergraph> next;
    for (const OpenHypergraph& a : frontier) {
      for (const OpenHypergraph& b : seeds) {
        auto consider = [&](const OpenHypergraph& d) {
          if (!admissible(d)) return;
          auto canon = og_canonical(d);
          if (all.emplace(canon.certificate, canon.diagram).second) next.push_back(canon.diagram);
        };
        if (static_cast<int>(a.edges.size() + b.edges.size()) <= max_edges) {
          consider(og_tensor(a, b));
          consider(og_tensor(b, a));
          if (a.boundary_out_types() == b.boundary_in_types()) consider(og_compose(a, b));
          if (b.boundary_out_types() == a.boundary_in_types()) consider(og_compose(b, a));
        }
      }
    }
    frontier = std::move(next);
  }

  std::vector<OpenHypergraph> out;
  out.reserve(all.size());
  for (auto& [cert, d] : all) out.push_back(std::move(d));
  return out;  // map iteration order == sorted by certificate
}

OpenHypergraph pad_with_identities(const OpenHypergraph& d, const TypeProfile& extra,
                                   bool pattern_first) {
  OpenHypergraph id = og_identity(extra);
  return pattern_first ? og_tensor(d, id) : og_tensor(id, d);
}

OpenHypergraph permute_boundaries(const OpenHypergraph& d, const std::vector<int>& in_perm,
                                  const std::vector<int>& out_perm) {
  if (in_perm.size() != d.boundary_in.size() || out_perm.size() != d.boundary_out.size())
    throw domain_mismatch("permute_boundaries: permutation arity mismatch");
  OpenHypergraph out = d;
  for (size_t i = 0; i < in_perm.size(); ++i)
    out.boundary_in[i] = d.boundary_in[static_cast<size_t>(in_perm[i])];
  for (size_t i = 0; i < out_perm.size(); ++i)
    out.boundary_out[i] = d.boundary_out[static_cast<size_t>(out_perm[i])];
  return out;
}

}  // namespace agentarch
