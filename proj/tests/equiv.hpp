#pragma once

// Structural equivalence helpers for round-trip tests. Each returns an empty
// string when the two values agree and a description of the first mismatch
// otherwise, so both doctest suites and the acceptance binary can report the
// offending detail. Diagram-valued fields compare up to isomorphism
// (og_equal); name-indexed collections compare as sets/maps.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "agentarch/archcat.hpp"
#include "agentarch/diagram.hpp"
#include "agentarch/env.hpp"

namespace testutil {

inline std::string presentation_mismatch(const agentarch::HypergraphPresentation& a,
                                         const agentarch::HypergraphPresentation& b,
                                         const std::string& where) {
  using namespace agentarch;
  std::vector<TypeSymbol> ta = a.types, tb = b.types;
  std::sort(ta.begin(), ta.end());
  std::sort(tb.begin(), tb.end());
  if (ta != tb) return where + ": type sets differ";
  std::vector<GeneratorSymbol> ga = a.generators, gb = b.generators;
  std::sort(ga.begin(), ga.end());
  std::sort(gb.begin(), gb.end());
  if (ga != gb) return where + ": generator sets differ";
  if (a.equations.size() != b.equations.size()) return where + ": equation counts differ";
  for (std::size_t i = 0; i < a.equations.size(); ++i) {
    if (!og_equal(a.equations[i].first, b.equations[i].first) ||
        !og_equal(a.equations[i].second, b.equations[i].second))
      return where + ": equation " + std::to_string(i) + " differs";
  }
  return "";
}

inline std::string arch_mismatch(const agentarch::Architecture& a,
                                 const agentarch::Architecture& b) {
  using namespace agentarch;
  if (a.name != b.name) return "names differ: " + a.name + " vs " + b.name;
  if (std::string m = presentation_mismatch(a.syn, b.syn, "syntax"); !m.empty()) return m;
  if (std::string m = presentation_mismatch(a.know, b.know, "knowledge"); !m.empty()) return m;
  if (!og_equal(a.pattern.diagram, b.pattern.diagram)) return "patterns differ";

  auto pair_set = [](const RelationalInterface& i) {
    std::vector<std::pair<std::string, std::string>> v;
    for (const auto& [s, k] : i.support) v.emplace_back(s.name, k.name);
    std::sort(v.begin(), v.end());
    return v;
  };
  if (pair_set(a.iface) != pair_set(b.iface)) return "support pair sets differ";

  if (a.iface.bindings.size() != b.iface.bindings.size()) return "binding counts differ";
  for (const auto& [g, img] : a.iface.bindings) {
    auto it = b.iface.bindings.find(g);
    if (it == b.iface.bindings.end()) return "binding for " + g + " missing";
    if (!og_equal(img, it->second)) return "binding for " + g + " differs";
  }

  if (a.constraints.size() != b.constraints.size()) return "constraint counts differ";
  for (std::size_t i = 0; i < a.constraints.size(); ++i) {
    const Constraint& ca = a.constraints[i];
    const Constraint& cb = b.constraints[i];
    if (ca.id != cb.id) return "constraint " + std::to_string(i) + " ids differ";
    if (ca.kind != cb.kind) return "constraint " + ca.id + " kinds differ";
    if (ca.params != cb.params) return "constraint " + ca.id + " params differ";
    if (ca.scope.refs.size() != cb.scope.refs.size())
      return "constraint " + ca.id + " scope sizes differ";
    for (std::size_t j = 0; j < ca.scope.refs.size(); ++j)
      if (ca.scope.refs[j] != cb.scope.refs[j])
        return "constraint " + ca.id + " scope ref " + std::to_string(j) + " differs";
  }

  if (a.display != b.display) return "display maps differ";
  return "";
}

inline std::string morphism_mismatch(const agentarch::ArchMorphism& a,
                                     const agentarch::ArchMorphism& b) {
  using namespace agentarch;
  if (a.name != b.name) return "names differ";
  if (a.source != b.source || a.target != b.target) return "endpoints differ";
  if (a.type_map_syn != b.type_map_syn) return "syntax type maps differ";
  if (a.type_map_know != b.type_map_know) return "knowledge type maps differ";
  auto gen_maps = [](const std::map<std::string, OpenHypergraph>& ma,
                     const std::map<std::string, OpenHypergraph>& mb,
                     const std::string& where) -> std::string {
    if (ma.size() != mb.size()) return where + " gen map sizes differ";
    for (const auto& [g, img] : ma) {
      auto it = mb.find(g);
      if (it == mb.end()) return where + " image of " + g + " missing";
      if (!og_equal(img, it->second)) return where + " image of " + g + " differs";
    }
    return "";
  };
  if (std::string m = gen_maps(a.gen_map_syn, b.gen_map_syn, "syntax"); !m.empty()) return m;
  if (std::string m = gen_maps(a.gen_map_know, b.gen_map_know, "knowledge"); !m.empty()) return m;
  return "";
}

inline std::string env_mismatch(const agentarch::EnvSpec& a, const agentarch::EnvSpec& b) {
  if (a.name != b.name) return "names differ";
  if (a.states != b.states) return "state lists differ";
  if (a.actions != b.actions) return "action lists differ";
  if (a.gamma != b.gamma) return "gammas differ";
  if (a.start_state != b.start_state) return "start states differ";
  if (a.kernel != b.kernel) return "kernels differ";
  return "";
}

}  // namespace testutil
