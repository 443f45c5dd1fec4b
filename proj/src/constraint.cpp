#include "agentarch/constraint.hpp"

#include <algorithm>
#include <set>

#include "agentarch/archcat.hpp"
#include "agentarch/errors.hpp"

namespace agentarch {

const char* to_string(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::Representability: return "representability";
    case ConstraintKind::FixedPoint: return "fixed_point";
    case ConstraintKind::PolicyValueCompat: return "policy_value";
    case ConstraintKind::MarkovFactorization: return "markov";
    case ConstraintKind::OntologicalFactorization: return "ontological";
    case ConstraintKind::Unchecked: return "unchecked";
  }
  return "?";
}

const std::vector<ConstraintKindInfo>& constraint_registry_list() {
  static const std::vector<ConstraintKindInfo> registry = {
      {ConstraintKind::Representability, "representability", {"carrier"}, {"states", "actions"}, true},
      {ConstraintKind::FixedPoint, "fixed_point", {"carrier", "gamma", "tol", "max_iter"}, {"vi_tol"}, true},
      {ConstraintKind::PolicyValueCompat, "policy_value", {"policy", "carrier"}, {}, true},
      {ConstraintKind::MarkovFactorization, "markov", {"interaction_generator"}, {}, true},
      {ConstraintKind::OntologicalFactorization, "ontological", {"type", "factors"}, {}, true},
      {ConstraintKind::Unchecked, "unchecked", {"prose"}, {}, false},
  };
  return registry;
}

const ConstraintKindInfo& constraint_kind_info(ConstraintKind k) {
  for (const ConstraintKindInfo& info : constraint_registry_list())
    if (info.kind == k) return info;
  throw unknown_name("unregistered constraint kind");
}

std::vector<ResolvedRef> scope_resolve(const Architecture& arch, const ScopeRef& scope) {
  std::vector<ResolvedRef> out;
  for (const SymbolRef& ref : scope.refs) {
    ResolvedRef r{ref, {}};
    using Space = SymbolRef::Space;
    auto probe = [&](Space space) {
      switch (space) {
        case Space::SynType:
          if (arch.syn.has_type(TypeSymbol{ref.name})) r.hits.push_back(Space::SynType);
          break;
        case Space::KnowType:
          if (arch.know.has_type(TypeSymbol{ref.name})) r.hits.push_back(Space::KnowType);
          break;
        case Space::SynGen:
          if (arch.syn.find_generator(ref.name)) r.hits.push_back(Space::SynGen);
          break;
        case Space::KnowGen:
          if (arch.know.find_generator(ref.name)) r.hits.push_back(Space::KnowGen);
          break;
        case Space::Pair:
          if (arch.iface.pair_supported(TypeSymbol{ref.name}, TypeSymbol{ref.name2}))
            r.hits.push_back(Space::Pair);
          break;
        default: break;
      }
    };
    if (ref.space == Space::Auto) {
      probe(Space::SynType);
      probe(Space::KnowType);
      probe(Space::SynGen);
      probe(Space::KnowGen);
    } else {
      probe(ref.space);
    }
    if (r.hits.empty()) {
      std::string shown = ref.space == Space::Pair ? "(" + ref.name + ", " + ref.name2 + ")" : ref.name;
      throw unknown_ref("scope of architecture '" + arch.name + "' names unknown symbol '" + shown + "'");
    }
    out.push_back(std::move(r));
  }
  return out;
}

Verdict constraints_validate(const Architecture& arch) {
  Verdict v = Verdict::passed();
  std::set<std::string> ids;
  for (const Constraint& c : arch.constraints) {
    if (!ids.insert(c.id).second) {
      v.status = Verdict::Status::fail;
      v.note("duplicate constraint id '" + c.id + "'");
    }
    try {
      scope_resolve(arch, c.scope);
    } catch (const Error& e) {
      v.status = Verdict::Status::fail;
      v.note("constraint '" + c.id + "': " + e.what());
    }
    const ConstraintKindInfo& info = constraint_kind_info(c.kind);
    for (const std::string& key : info.required_params)
      if (!c.params.count(key)) {
        v.status = Verdict::Status::fail;
        v.note("constraint '" + c.id + "' (" + info.keyword + ") missing param '" + key + "'");
      }
    for (const auto& [key, value] : c.params) {
      bool known = std::find(info.required_params.begin(), info.required_params.end(), key) !=
                       info.required_params.end() ||
                   std::find(info.optional_params.begin(), info.optional_params.end(), key) !=
                       info.optional_params.end();
      if (!known) {
        v.status = Verdict::Status::fail;
        v.note("constraint '" + c.id + "' (" + info.keyword + ") has unknown param '" + key + "'");
      }
    }
  }
  if (v.ok()) v.note(std::to_string(arch.constraints.size()) + " constraint(s) well-formed");
  return v;
}

}  // namespace agentarch
