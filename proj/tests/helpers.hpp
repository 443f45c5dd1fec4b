#pragma once

// Shared test utilities: source-tree paths, file slurping, and a random
// generator of valid diagrams used by the law property tests. Kept free of
// any test-framework dependency so the acceptance binary can reuse it.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "agentarch/diagram.hpp"
#include "agentarch/rng.hpp"

#ifndef AGENTARCH_SOURCE_DIR
#define AGENTARCH_SOURCE_DIR "."
#endif

namespace testutil {

inline std::string src_path(const std::string& rel) {
  return std::string(AGENTARCH_SOURCE_DIR) + "/" + rel;
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

// Fixed signature for random-diagram property tests: three types and a mix
// of generator shapes (unary, binary, coproducing, zero-input, zero-output).
inline const std::vector<agentarch::TypeSymbol>& law_types() {
  static const std::vector<agentarch::TypeSymbol> ts = {{"X"}, {"Y"}, {"Z"}};
  return ts;
}

inline const std::vector<agentarch::GeneratorSymbol>& law_generators() {
  static const std::vector<agentarch::GeneratorSymbol> gens = {
      {"f", {{"X"}}, {{"Y"}}},
      {"g", {{"Y"}}, {{"Z"}}},
      {"h", {{"X"}, {"Y"}}, {{"Z"}}},
      {"k", {{"Z"}}, {{"X"}, {"X"}}},
      {"mk", {{"Y"}, {"Z"}}, {{"Y"}}},
      {"src", {}, {{"Y"}}},
      {"snk", {{"Z"}}, {}},
  };
  return gens;
}

// A random valid diagram with at most max_edges edges. Wires are created on
// demand per port and reused with positive probability, so shared wires
// (spiders) and feedback occur naturally. When in_profile is non-null the in
// boundary is exactly one fresh wire per entry, which makes it trivial to
// build composable chains: pass the previous diagram's out profile.
inline agentarch::OpenHypergraph random_diagram(agentarch::Rng& rng, int max_edges,
                                                const agentarch::TypeProfile* in_profile =
                                                    nullptr) {
  using namespace agentarch;
  OpenHypergraph d;
  auto fresh = [&](const TypeSymbol& t) {
    d.wires.push_back(t);
    return static_cast<WireId>(d.wires.size() - 1);
  };
  auto pick_of_type = [&](const TypeSymbol& t) -> WireId {
    std::vector<WireId> same;
    for (std::size_t w = 0; w < d.wires.size(); ++w)
      if (d.wires[w] == t) same.push_back(static_cast<WireId>(w));
    if (!same.empty() && rng.uniform() < 0.6)
      return same[rng.below(static_cast<int>(same.size()))];
    return fresh(t);
  };

  if (in_profile)
    for (const TypeSymbol& t : *in_profile) d.boundary_in.push_back(fresh(t));

  const auto& gens = law_generators();
  const int n_edges = rng.below(max_edges + 1);
  for (int i = 0; i < n_edges; ++i) {
    DiagramEdge e;
    e.label = gens[rng.below(static_cast<int>(gens.size()))];
    for (const TypeSymbol& t : e.label.dom) e.in_ports.push_back(pick_of_type(t));
    for (const TypeSymbol& t : e.label.cod) e.out_ports.push_back(pick_of_type(t));
    d.edges.push_back(std::move(e));
  }

  if (d.wires.empty() && rng.uniform() < 0.8)
    fresh(law_types()[rng.below(static_cast<int>(law_types().size()))]);

  if (!in_profile && !d.wires.empty()) {
    const int nin = rng.below(4);
    for (int i = 0; i < nin; ++i)
      d.boundary_in.push_back(rng.below(static_cast<int>(d.wires.size())));
  }
  if (!d.wires.empty()) {
    const int nout = rng.below(4);
    for (int i = 0; i < nout; ++i)
      d.boundary_out.push_back(rng.below(static_cast<int>(d.wires.size())));
  }
  d.check();
  return d;
}

}  // namespace testutil
