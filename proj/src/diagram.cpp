#include "agentarch/diagram.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "agentarch/errors.hpp"

namespace agentarch {

TypeProfile OpenHypergraph::boundary_in_types() const {
  TypeProfile out;
  out.reserve(boundary_in.size());
  for (WireId w : boundary_in) out.push_back(wires.at(w));
  return out;
}

TypeProfile OpenHypergraph::boundary_out_types() const {
  TypeProfile out;
  out.reserve(boundary_out.size());
  for (WireId w : boundary_out) out.push_back(wires.at(w));
  return out;
}

void OpenHypergraph::check() const {
  auto in_range = [&](WireId w) { return w >= 0 && w < static_cast<int>(wires.size()); };
  for (WireId w : boundary_in)
    if (!in_range(w)) throw Error("MalformedDiagram", "boundary_in wire id out of range");
  for (WireId w : boundary_out)
    if (!in_range(w)) throw Error("MalformedDiagram", "boundary_out wire id out of range");
  for (const DiagramEdge& e : edges) {
    if (e.in_ports.size() != e.label.dom.size() || e.out_ports.size() != e.label.cod.size())
      throw Error("MalformedDiagram", "edge '" + e.label.name + "' port arity disagrees with label");
    for (size_t i = 0; i < e.in_ports.size(); ++i) {
      if (!in_range(e.in_ports[i]))
        throw Error("MalformedDiagram", "edge '" + e.label.name + "' in_port id out of range");
      if (wires[e.in_ports[i]] != e.label.dom[i])
        throw Error("MalformedDiagram",
                    "edge '" + e.label.name + "' in_port " + std::to_string(i) + " carries '" +
                        wires[e.in_ports[i]].name + "', label expects '" + e.label.dom[i].name + "'");
    }
    for (size_t i = 0; i < e.out_ports.size(); ++i) {
      if (!in_range(e.out_ports[i]))
        throw Error("MalformedDiagram", "edge '" + e.label.name + "' out_port id out of range");
      if (wires[e.out_ports[i]] != e.label.cod[i])
        throw Error("MalformedDiagram",
                    "edge '" + e.label.name + "' out_port " + std::to_string(i) + " carries '" +
                        wires[e.out_ports[i]].name + "', label expects '" + e.label.cod[i].name + "'");
    }
  }
}

OpenHypergraph og_identity(const TypeProfile& profile) {
  OpenHypergraph d;
  d.wires = profile;
  d.boundary_in.resize(profile.size());
  std::iota(d.boundary_in.begin(), d.boundary_in.end(), 0);
  d.boundary_out = d.boundary_in;
  return d;
}

OpenHypergraph og_generator(const GeneratorSymbol& g) {
  OpenHypergraph d;
  d.wires = g.dom;
  d.wires.insert(d.wires.end(), g.cod.begin(), g.cod.end());
  DiagramEdge e;
  e.label = g;
  for (size_t i = 0; i < g.dom.size(); ++i) e.in_ports.push_back(static_cast<WireId>(i));
  for (size_t i = 0; i < g.cod.size(); ++i) e.out_ports.push_back(static_cast<WireId>(g.dom.size() + i));
  d.edges.push_back(std::move(e));
  d.boundary_in = d.edges[0].in_ports;
  d.boundary_out = d.edges[0].out_ports;
  return d;
}

OpenHypergraph og_spider(const TypeSymbol& t, int m, int n) {
  if (m < 0 || n < 0) throw Error("MalformedDiagram", "spider legs must be nonnegative");
  OpenHypergraph d;
  d.wires = {t};
  d.boundary_in.assign(static_cast<size_t>(m), 0);
  d.boundary_out.assign(static_cast<size_t>(n), 0);
  return d;
}

OpenHypergraph og_symmetry(const TypeProfile& p, const TypeProfile& q) {
  OpenHypergraph d;
  d.wires = p;
  d.wires.insert(d.wires.end(), q.begin(), q.end());
  d.boundary_in.resize(d.wires.size());
  std::iota(d.boundary_in.begin(), d.boundary_in.end(), 0);
  for (size_t j = 0; j < q.size(); ++j) d.boundary_out.push_back(static_cast<WireId>(p.size() + j));
  for (size_t i = 0; i < p.size(); ++i) d.boundary_out.push_back(static_cast<WireId>(i));
  return d;
}

namespace {

// Plain union-find over wire ids of a disjoint union.
struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[b] = a;
  }
};

// Rebuild a diagram after wire identifications: classes become wires in
// first-appearance order, edges and boundaries are mapped through.
OpenHypergraph quotient(const std::vector<TypeSymbol>& wire_types,
                        const std::vector<DiagramEdge>& edges,
                        const std::vector<WireId>& bin, const std::vector<WireId>& bout,
                        UnionFind& uf) {
  const int n = static_cast<int>(wire_types.size());
  std::vector<int> rename(n, -1);
  OpenHypergraph out;
  auto to_new = [&](WireId w) {
    int r = uf.find(w);
    if (rename[r] < 0) {
      rename[r] = static_cast<int>(out.wires.size());
      out.wires.push_back(wire_types[r]);
    }
    return rename[r];
  };
  for (int w = 0; w < n; ++w) to_new(w);
  out.edges = edges;
  for (DiagramEdge& e : out.edges) {
    for (WireId& w : e.in_ports) w = to_new(w);
    for (WireId& w : e.out_ports) w = to_new(w);
  }
  for (WireId w : bin) out.boundary_in.push_back(to_new(w));
  for (WireId w : bout) out.boundary_out.push_back(to_new(w));
  return out;
}

}  // namespace

OpenHypergraph og_compose(const OpenHypergraph& f, const OpenHypergraph& g) {
  if (f.boundary_out.size() != g.boundary_in.size())
    throw boundary_type_mismatch("compose: middle boundary arity " +
                                 std::to_string(f.boundary_out.size()) + " vs " +
                                 std::to_string(g.boundary_in.size()));
  for (size_t i = 0; i < f.boundary_out.size(); ++i) {
    const TypeSymbol& a = f.wires[f.boundary_out[i]];
    const TypeSymbol& b = g.wires[g.boundary_in[i]];
    if (a != b)
      throw boundary_type_mismatch("compose: position " + std::to_string(i) + " expects '" +
                                   a.name + "', found '" + b.name + "'");
  }

  const int nf = static_cast<int>(f.wires.size());
  std::vector<TypeSymbol> wire_types = f.wires;
  wire_types.insert(wire_types.end(), g.wires.begin(), g.wires.end());
  std::vector<DiagramEdge> edges = f.edges;
  for (DiagramEdge e : g.edges) {
    for (WireId& w : e.in_ports) w += nf;
    for (WireId& w : e.out_ports) w += nf;
    edges.push_back(std::move(e));
  }
  std::vector<WireId> bout;
  for (WireId w : g.boundary_out) bout.push_back(w + nf);

  UnionFind uf(static_cast<int>(wire_types.size()));
  for (size_t i = 0; i < f.boundary_out.size(); ++i)
    uf.unite(f.boundary_out[i], g.boundary_in[i] + nf);
  return quotient(wire_types, edges, f.boundary_in, bout, uf);
}

OpenHypergraph og_tensor(const OpenHypergraph& f, const OpenHypergraph& g) {
  OpenHypergraph out = f;
  const int nf = static_cast<int>(f.wires.size());
  out.wires.insert(out.wires.end(), g.wires.begin(), g.wires.end());
  for (DiagramEdge e : g.edges) {
    for (WireId& w : e.in_ports) w += nf;
    for (WireId& w : e.out_ports) w += nf;
    out.edges.push_back(std::move(e));
  }
  for (WireId w : g.boundary_in) out.boundary_in.push_back(w + nf);
  for (WireId w : g.boundary_out) out.boundary_out.push_back(w + nf);
  return out;
}

OpenHypergraph og_identify_wires(const OpenHypergraph& d,
                                 const std::vector<std::pair<WireId, WireId>>& pairs) {
  UnionFind uf(static_cast<int>(d.wires.size()));
  for (auto [a, b] : pairs) {
    if (d.wires.at(a) != d.wires.at(b))
      throw boundary_type_mismatch("identify_wires: '" + d.wires[a].name + "' vs '" +
                                   d.wires[b].name + "'");
    uf.unite(a, b);
  }
  return quotient(d.wires, d.edges, d.boundary_in, d.boundary_out, uf);
}

// ---------------------------------------------------------------------------
// Canonicalization: iterative partition refinement over wire/edge colors with
// individualization on ties. Worst case exponential, fine at desk scale.

namespace {

std::string label_key(const GeneratorSymbol& g) {
  std::string key = g.name + "(";
  for (const TypeSymbol& t : g.dom) key += t.name + ",";
  key += ")->(";
  for (const TypeSymbol& t : g.cod) key += t.name + ",";
  key += ")";
  return key;
}

struct Coloring {
  std::vector<int> wire, edge;
};

// Repeatedly refine wire colors by incident (edge color, direction, port
// index) multisets and edge colors by ordered port wire colors.
void refine(const OpenHypergraph& d, Coloring& c) {
  for (;;) {
    bool changed = false;
    {
      std::vector<std::pair<std::string, int>> keys(d.wires.size());
      for (size_t w = 0; w < d.wires.size(); ++w) {
        std::vector<std::string> inc;
        for (size_t e = 0; e < d.edges.size(); ++e) {
          for (size_t p = 0; p < d.edges[e].in_ports.size(); ++p)
            if (d.edges[e].in_ports[p] == static_cast<WireId>(w))
              inc.push_back("i" + std::to_string(c.edge[e]) + "." + std::to_string(p));
          for (size_t p = 0; p < d.edges[e].out_ports.size(); ++p)
            if (d.edges[e].out_ports[p] == static_cast<WireId>(w))
              inc.push_back("o" + std::to_string(c.edge[e]) + "." + std::to_string(p));
        }
        std::sort(inc.begin(), inc.end());
        std::string key = std::to_string(c.wire[w]) + "|";
        for (const std::string& s : inc) key += s + ";";
        keys[w] = {std::move(key), static_cast<int>(w)};
      }
      auto sorted = keys;
      std::sort(sorted.begin(), sorted.end());
      std::map<std::string, int> rank;
      for (const auto& [k, _] : sorted)
        if (!rank.count(k)) rank.emplace(k, static_cast<int>(rank.size()));
      for (size_t w = 0; w < d.wires.size(); ++w) {
        int nc = rank[keys[w].first];
        if (nc != c.wire[w]) changed = true;
        c.wire[w] = nc;
      }
    }
    {
      std::vector<std::string> keys(d.edges.size());
      for (size_t e = 0; e < d.edges.size(); ++e) {
        std::string key = std::to_string(c.edge[e]) + "|";
        for (WireId w : d.edges[e].in_ports) key += std::to_string(c.wire[w]) + ",";
        key += "|";
        for (WireId w : d.edges[e].out_ports) key += std::to_string(c.wire[w]) + ",";
        keys[e] = std::move(key);
      }
      auto sorted = keys;
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      std::map<std::string, int> rank;
      for (size_t i = 0; i < sorted.size(); ++i) rank.emplace(sorted[i], static_cast<int>(i));
      for (size_t e = 0; e < d.edges.size(); ++e) {
        int nc = rank[keys[e]];
        if (nc != c.edge[e]) changed = true;
        c.edge[e] = nc;
      }
    }
    if (!changed) return;
  }
}

// Boundary anchors of one connected component: (global boundary position,
// local wire id), ascending by position. Positions stay global so that two
// otherwise isomorphic components touching different boundary slots are never
// confused with one another.
struct CompBoundary {
  std::vector<std::pair<int, int>> in, out;
};

Coloring initial_coloring(const OpenHypergraph& d, const CompBoundary& cb) {
  Coloring c;
  c.wire.resize(d.wires.size());
  c.edge.resize(d.edges.size());
  std::vector<std::string> wkeys(d.wires.size());
  // Boundary occurrences are position-exact under isomorphism, so they
  // anchor the initial colors.
  for (size_t w = 0; w < d.wires.size(); ++w) wkeys[w] = d.wires[w].name + "|b";
  for (const auto& [pos, w] : cb.in) wkeys[w] += "i" + std::to_string(pos) + ",";
  for (const auto& [pos, w] : cb.out) wkeys[w] += "o" + std::to_string(pos) + ",";
  {
    auto sorted = wkeys;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::map<std::string, int> rank;
    for (size_t i = 0; i < sorted.size(); ++i) rank.emplace(sorted[i], static_cast<int>(i));
    for (size_t w = 0; w < d.wires.size(); ++w) c.wire[w] = rank[wkeys[w]];
  }
  std::vector<std::string> ekeys(d.edges.size());
  for (size_t e = 0; e < d.edges.size(); ++e) ekeys[e] = label_key(d.edges[e].label);
  {
    auto sorted = ekeys;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::map<std::string, int> rank;
    for (size_t i = 0; i < sorted.size(); ++i) rank.emplace(sorted[i], static_cast<int>(i));
    for (size_t e = 0; e < d.edges.size(); ++e) c.edge[e] = rank[ekeys[e]];
  }
  return c;
}

// Serialize a diagram under a discrete (or tie-broken) wire coloring.
std::string certificate_for(const OpenHypergraph& d, const std::vector<int>& wire_order_key) {
  // wire_order_key[w] gives the canonical index of wire w.
  std::ostringstream os;
  const size_t n = d.wires.size();
  std::vector<int> inv(n);
  for (size_t w = 0; w < n; ++w) inv[static_cast<size_t>(wire_order_key[w])] = static_cast<int>(w);
  os << "W" << n << ":";
  for (size_t i = 0; i < n; ++i) os << d.wires[inv[i]].name << ",";
  os << ";BIN:";
  for (WireId w : d.boundary_in) os << wire_order_key[w] << ",";
  os << ";BOUT:";
  for (WireId w : d.boundary_out) os << wire_order_key[w] << ",";
  os << ";E:";
  std::vector<std::string> rows;
  for (const DiagramEdge& e : d.edges) {
    std::string row = label_key(e.label) + "[";
    for (WireId w : e.in_ports) row += std::to_string(wire_order_key[w]) + ",";
    row += "|";
    for (WireId w : e.out_ports) row += std::to_string(wire_order_key[w]) + ",";
    row += "]";
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end());
  for (const std::string& r : rows) os << r << ";";
  return os.str();
}

// Serialization of one component under a local wire order; boundary anchors
// keep their global positions.
std::string component_certificate(const OpenHypergraph& d, const CompBoundary& cb,
                                  const std::vector<int>& order) {
  std::ostringstream os;
  const size_t n = d.wires.size();
  std::vector<int> inv(n);
  for (size_t w = 0; w < n; ++w) inv[static_cast<size_t>(order[w])] = static_cast<int>(w);
  os << "W" << n << ":";
  for (size_t i = 0; i < n; ++i) os << d.wires[inv[i]].name << ",";
  os << ";BIN:";
  for (const auto& [pos, w] : cb.in) os << pos << ":" << order[w] << ",";
  os << ";BOUT:";
  for (const auto& [pos, w] : cb.out) os << pos << ":" << order[w] << ",";
  os << ";E:";
  std::vector<std::string> rows;
  for (const DiagramEdge& e : d.edges) {
    std::string row = label_key(e.label) + "[";
    for (WireId w : e.in_ports) row += std::to_string(order[w]) + ",";
    row += "|";
    for (WireId w : e.out_ports) row += std::to_string(order[w]) + ",";
    row += "]";
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end());
  for (const std::string& r : rows) os << r << ";";
  return os.str();
}

// True when swapping wires u and v, together with the induced pairing of
// their incident edges, is an automorphism of d. Such twins arise constantly
// from fan-outs onto fresh wires; branching on one member of a twin group is
// enough because the branches of its mates are isomorphic images with the
// same leaf certificates.
bool interchangeable(const OpenHypergraph& d, int u, int v) {
  std::vector<int> eu, ev;
  for (size_t e = 0; e < d.edges.size(); ++e) {
    bool tu = false, tv = false;
    for (WireId w : d.edges[e].in_ports) {
      tu = tu || w == u;
      tv = tv || w == v;
    }
    for (WireId w : d.edges[e].out_ports) {
      tu = tu || w == u;
      tv = tv || w == v;
    }
    if (tu && tv) return false;  // a shared edge needs more than a transposition
    if (tu) eu.push_back(static_cast<int>(e));
    if (tv) ev.push_back(static_cast<int>(e));
  }
  if (eu.size() != ev.size()) return false;
  std::vector<char> used(ev.size(), 0);
  for (int e : eu) {
    DiagramEdge sub = d.edges[e];
    for (WireId& w : sub.in_ports)
      if (w == u) w = v;
    for (WireId& w : sub.out_ports)
      if (w == u) w = v;
    bool found = false;
    for (size_t k = 0; k < ev.size() && !found; ++k) {
      if (used[k]) continue;
      const DiagramEdge& cand = d.edges[ev[k]];
      if (label_key(cand.label) == label_key(sub.label) && cand.in_ports == sub.in_ports &&
          cand.out_ports == sub.out_ports) {
        used[k] = 1;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

// Returns the canonical wire order (by certificate minimality) for d.
template <class CertFn>
void canonical_search(const OpenHypergraph& d, Coloring c, const CertFn& cert_fn,
                      std::string& best, std::vector<int>& best_order, bool& have_best) {
  refine(d, c);

  // Find the first non-singleton wire color class (smallest color value).
  std::map<int, std::vector<int>> classes;
  for (size_t w = 0; w < d.wires.size(); ++w) classes[c.wire[w]].push_back(static_cast<int>(w));
  const std::vector<int>* tie = nullptr;
  for (const auto& [color, members] : classes)
    if (members.size() > 1) {
      tie = &members;
      break;
    }

  if (!tie) {
    // Discrete: wire color is already a total order.
    std::string cert = cert_fn(c.wire);
    if (!have_best || cert < best) {
      best = std::move(cert);
      best_order = c.wire;
      have_best = true;
    }
    return;
  }

  // One representative per group of pairwise interchangeable members.
  std::vector<int> reps;
  std::vector<char> claimed(tie->size(), 0);
  for (size_t i = 0; i < tie->size(); ++i) {
    if (claimed[i]) continue;
    reps.push_back((*tie)[i]);
    for (size_t j = i + 1; j < tie->size(); ++j)
      if (!claimed[j] && interchangeable(d, (*tie)[i], (*tie)[j])) claimed[j] = 1;
  }

  for (int w : reps) {
    Coloring branch = c;
    // Individualize w: give it a color just below its class, shifting is
    // unnecessary because refinement re-ranks colors densely.
    branch.wire[w] = -1;
    canonical_search(d, branch, cert_fn, best, best_order, have_best);
  }
}

}  // namespace

CanonicalForm og_canonical(const OpenHypergraph& d) {
  d.check();
  const int n = static_cast<int>(d.wires.size());

  // The individualization search runs per connected component. Components are
  // independent up to their boundary anchors, and splitting prevents the
  // factorial blowup over families of identical closed components that
  // composition loves to produce.
  UnionFind uf(n);
  for (const DiagramEdge& e : d.edges) {
    int first = -1;
    auto walk = [&](const std::vector<WireId>& ports) {
      for (WireId w : ports) {
        if (first < 0)
          first = w;
        else
          uf.unite(first, w);
      }
    };
    walk(e.in_ports);
    walk(e.out_ports);
  }

  std::map<int, int> root_comp;
  std::vector<std::vector<int>> comp_wires;  // global wire ids per component
  std::vector<int> wire_comp(n, -1), wire_local(n, -1);
  for (int w = 0; w < n; ++w) {
    const int r = uf.find(w);
    auto [it, fresh] = root_comp.try_emplace(r, static_cast<int>(comp_wires.size()));
    if (fresh) comp_wires.emplace_back();
    wire_comp[w] = it->second;
    wire_local[w] = static_cast<int>(comp_wires[it->second].size());
    comp_wires[it->second].push_back(w);
  }
  const int n_comps = static_cast<int>(comp_wires.size());

  std::vector<OpenHypergraph> sub(n_comps);
  std::vector<CompBoundary> cb(n_comps);
  for (int ci = 0; ci < n_comps; ++ci)
    for (int w : comp_wires[ci]) sub[ci].wires.push_back(d.wires[w]);
  for (const DiagramEdge& e : d.edges) {
    // An edge with no ports at all touches no wires; it still appears in the
    // global certificate below, it just cannot influence any wire order.
    if (e.in_ports.empty() && e.out_ports.empty()) continue;
    const int ci = wire_comp[e.in_ports.empty() ? e.out_ports[0] : e.in_ports[0]];
    DiagramEdge local = e;
    for (WireId& w : local.in_ports) w = wire_local[w];
    for (WireId& w : local.out_ports) w = wire_local[w];
    sub[ci].edges.push_back(std::move(local));
  }
  for (int i = 0; i < static_cast<int>(d.boundary_in.size()); ++i)
    cb[wire_comp[d.boundary_in[i]]].in.emplace_back(i, wire_local[d.boundary_in[i]]);
  for (int i = 0; i < static_cast<int>(d.boundary_out.size()); ++i)
    cb[wire_comp[d.boundary_out[i]]].out.emplace_back(i, wire_local[d.boundary_out[i]]);

  struct CompResult {
    std::string cert;
    std::vector<int> order;  // local wire id -> local canonical index
  };
  std::vector<CompResult> res(n_comps);
  for (int ci = 0; ci < n_comps; ++ci) {
    bool have = false;
    auto cert_fn = [&](const std::vector<int>& ord) {
      return component_certificate(sub[ci], cb[ci], ord);
    };
    canonical_search(sub[ci], initial_coloring(sub[ci], cb[ci]), cert_fn, res[ci].cert,
                     res[ci].order, have);
  }

  // Components in certificate order. Equal certificates belong to isomorphic
  // closed components (anchored ones embed their distinct boundary
  // positions), so any deterministic tiebreak serializes identically.
  std::vector<int> comp_order(n_comps);
  std::iota(comp_order.begin(), comp_order.end(), 0);
  std::sort(comp_order.begin(), comp_order.end(), [&](int a, int b) {
    if (res[a].cert != res[b].cert) return res[a].cert < res[b].cert;
    return comp_wires[a][0] < comp_wires[b][0];
  });

  std::vector<int> order(n, -1);  // global wire id -> global canonical index
  int base = 0;
  for (int ci : comp_order) {
    for (size_t lw = 0; lw < comp_wires[ci].size(); ++lw)
      order[comp_wires[ci][lw]] = base + res[ci].order[lw];
    base += static_cast<int>(comp_wires[ci].size());
  }

  CanonicalForm out;
  out.certificate = certificate_for(d, order);
  out.diagram.wires.resize(n);
  for (int w = 0; w < n; ++w) out.diagram.wires[static_cast<size_t>(order[w])] = d.wires[w];
  out.diagram.edges = d.edges;
  for (DiagramEdge& e : out.diagram.edges) {
    for (WireId& w : e.in_ports) w = order[w];
    for (WireId& w : e.out_ports) w = order[w];
  }
  // Deterministic edge order as well.
  std::sort(out.diagram.edges.begin(), out.diagram.edges.end(),
            [](const DiagramEdge& a, const DiagramEdge& b) {
              auto key = [](const DiagramEdge& e) {
                return std::make_tuple(label_key(e.label), e.in_ports, e.out_ports);
              };
              return key(a) < key(b);
            });
  for (WireId w : d.boundary_in) out.diagram.boundary_in.push_back(order[w]);
  for (WireId w : d.boundary_out) out.diagram.boundary_out.push_back(order[w]);
  return out;
}

bool og_equal(const OpenHypergraph& a, const OpenHypergraph& b) {
  if (a.wires.size() != b.wires.size() || a.edges.size() != b.edges.size()) return false;
  if (a.boundary_in_types() != b.boundary_in_types()) return false;
  if (a.boundary_out_types() != b.boundary_out_types()) return false;
  return og_canonical(a).certificate == og_canonical(b).certificate;
}

// ---------------------------------------------------------------------------
// Loop detection.

namespace {

// Enumerate elementary cycles of the bipartite digraph restricted to wires
// of the given type (edges always kept as pass-through nodes). Nodes are
// 0..nw-1 for wires and nw..nw+ne-1 for edges; each cycle is counted once by
// only closing at its minimal node.
int count_cycles_for_type(const OpenHypergraph& d, const TypeSymbol& t) {
  const int nw = static_cast<int>(d.wires.size());
  const int ne = static_cast<int>(d.edges.size());
  std::vector<std::vector<int>> next(static_cast<size_t>(nw + ne));
  auto add = [&](int a, int b) {
    auto& v = next[static_cast<size_t>(a)];
    if (std::find(v.begin(), v.end(), b) == v.end()) v.push_back(b);
  };
  for (int e = 0; e < ne; ++e) {
    for (WireId w : d.edges[static_cast<size_t>(e)].in_ports)
      if (d.wires[w] == t) add(w, nw + e);
    for (WireId w : d.edges[static_cast<size_t>(e)].out_ports)
      if (d.wires[w] == t) add(nw + e, w);
  }

  int count = 0;
  std::vector<char> on_path(static_cast<size_t>(nw + ne), 0);
  // DFS from each start node, visiting only nodes >= start so each cycle is
  // reported exactly once (at its minimal node).
  auto dfs = [&](auto&& self, int start, int v) -> void {
    on_path[static_cast<size_t>(v)] = 1;
    for (int u : next[static_cast<size_t>(v)]) {
      if (u == start) {
        ++count;
      } else if (u > start && !on_path[static_cast<size_t>(u)]) {
        self(self, start, u);
      }
    }
    on_path[static_cast<size_t>(v)] = 0;
  };
  for (int start = 0; start < nw + ne; ++start) dfs(dfs, start, start);
  return count;
}

}  // namespace

LoopReport og_loop_carriers(const OpenHypergraph& d, const std::vector<TypeSymbol>& carriers) {
  LoopReport report;
  for (const TypeSymbol& t : carriers) {
    int n = count_cycles_for_type(d, t);
    report.cycle_count_per_carrier[t] = n;
  }
  for (const auto& [t, n] : report.cycle_count_per_carrier)
    if (n > 0) report.carriers_on_cycles.push_back(t);
  return report;
}

std::string og_to_dot(const OpenHypergraph& d, const std::string& name) {
  std::ostringstream os;
  os << "digraph \"" << name << "\" {\n  rankdir=LR;\n";
  for (size_t w = 0; w < d.wires.size(); ++w)
    os << "  w" << w << " [shape=circle,label=\"" << d.wires[w].name << "\"];\n";
  for (size_t e = 0; e < d.edges.size(); ++e) {
    os << "  e" << e << " [shape=box,label=\"" << d.edges[e].label.name << "\"];\n";
    for (size_t p = 0; p < d.edges[e].in_ports.size(); ++p)
      os << "  w" << d.edges[e].in_ports[p] << " -> e" << e << " [label=\"" << p << "\"];\n";
    for (size_t p = 0; p < d.edges[e].out_ports.size(); ++p)
      os << "  e" << e << " -> w" << d.edges[e].out_ports[p] << " [label=\"" << p << "\"];\n";
  }
  for (size_t i = 0; i < d.boundary_in.size(); ++i) {
    os << "  in" << i << " [shape=plaintext,label=\"in " << i << "\"];\n";
    os << "  in" << i << " -> w" << d.boundary_in[i] << " [style=dashed];\n";
  }
  for (size_t i = 0; i < d.boundary_out.size(); ++i) {
    os << "  out" << i << " [shape=plaintext,label=\"out " << i << "\"];\n";
    os << "  w" << d.boundary_out[i] << " -> out" << i << " [style=dashed];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace agentarch
