#include "agentarch/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <queue>
#include <sstream>

#include "agentarch/errors.hpp"
#include "agentarch/interface.hpp"
#include "agentarch/rl.hpp"

namespace agentarch {

// ---------------------------------------------------------------------------
// Semantic objects.

SemObject SemObject::finite(std::vector<std::string> labels) {
  SemObject o;
  o.kind = Kind::FiniteSet;
  o.labels = std::move(labels);
  for (size_t i = 0; i < o.labels.size(); ++i)
    for (size_t j = i + 1; j < o.labels.size(); ++j)
      if (o.labels[i] == o.labels[j])
        throw domain_mismatch("finite set labels must be distinct: '" + o.labels[i] + "'");
  return o;
}

SemObject SemObject::real_space(std::vector<int> shape) {
  SemObject o;
  o.kind = Kind::RealSpace;
  for (int d : shape)
    if (d < 1) throw shape_mismatch("real space dimensions must be >= 1");
  o.shape = std::move(shape);
  return o;
}

SemObject SemObject::product(std::vector<SemObject> parts) {
  SemObject o;
  o.kind = Kind::Product;
  o.parts = std::move(parts);
  return o;
}

bool SemObject::is_finite() const {
  switch (kind) {
    case Kind::FiniteSet: return true;
    case Kind::RealSpace: return false;
    case Kind::Product:
      return std::all_of(parts.begin(), parts.end(),
                         [](const SemObject& p) { return p.is_finite(); });
  }
  return false;
}

long long SemObject::cardinality() const {
  if (!is_finite()) throw domain_mismatch("cardinality of a non-finite object");
  if (kind == Kind::FiniteSet) return static_cast<long long>(labels.size());
  long long n = 1;
  for (const SemObject& p : parts) n *= p.cardinality();
  return n;
}

bool value_in(const SemObject& obj, const Value& v) {
  switch (obj.kind) {
    case SemObject::Kind::FiniteSet:
      return v.is_index() && v.index() >= 0 &&
             v.index() < static_cast<std::int64_t>(obj.labels.size());
    case SemObject::Kind::RealSpace:
      if (obj.shape == std::vector<int>{1} && v.is_real()) return true;
      return v.is_tensor() && v.tensor().shape == obj.shape;
    case SemObject::Kind::Product: {
      if (!v.is_tuple() || v.tuple().size() != obj.parts.size()) return false;
      for (size_t i = 0; i < obj.parts.size(); ++i)
        if (!value_in(obj.parts[i], v.tuple()[i])) return false;
      return true;
    }
  }
  return false;
}

Value zero_value(const SemObject& obj) {
  switch (obj.kind) {
    case SemObject::Kind::RealSpace: return Value{Tensor::zeros(obj.shape)};
    case SemObject::Kind::Product: {
      Tuple t;
      for (const SemObject& p : obj.parts) t.push_back(zero_value(p));
      return Value{std::move(t)};
    }
    case SemObject::Kind::FiniteSet:
      throw uninterpretable_spider("a finite set has no additive zero");
  }
  throw uninterpretable_spider("no additive zero");
}

Value element_of(const SemObject& obj, long long flat) {
  if (obj.kind == SemObject::Kind::FiniteSet) {
    if (flat < 0 || flat >= static_cast<long long>(obj.labels.size()))
      throw domain_mismatch("finite element index out of range");
    return Value{static_cast<std::int64_t>(flat)};
  }
  if (obj.kind == SemObject::Kind::Product) {
    // Mixed radix, last part fastest.
    std::vector<Value> parts(obj.parts.size());
    for (size_t i = obj.parts.size(); i-- > 0;) {
      long long card = obj.parts[i].cardinality();
      parts[i] = element_of(obj.parts[i], flat % card);
      flat /= card;
    }
    return Value{Tuple{parts.begin(), parts.end()}};
  }
  throw domain_mismatch("element_of on a non-finite object");
}

Value random_value(const SemObject& obj, Rng& rng) {
  switch (obj.kind) {
    case SemObject::Kind::FiniteSet:
      return Value{static_cast<std::int64_t>(rng.below(obj.labels.size()))};
    case SemObject::Kind::RealSpace: {
      Tensor t = Tensor::zeros(obj.shape);
      for (double& x : t.data) x = rng.uniform(-1.0, 1.0);
      return Value{std::move(t)};
    }
    case SemObject::Kind::Product: {
      Tuple t;
      for (const SemObject& p : obj.parts) t.push_back(random_value(p, rng));
      return Value{std::move(t)};
    }
  }
  throw domain_mismatch("random_value: unknown object kind");
}

// ---------------------------------------------------------------------------
// Semantic morphisms.

SemMorphism SemMorphism::deterministic(std::vector<SemObject> dom, std::vector<SemObject> cod,
                                       std::function<Tuple(const Tuple&)> fn) {
  SemMorphism m;
  m.dom = std::move(dom);
  m.cod = std::move(cod);
  m.body = BodyKind::Deterministic;
  m.det = std::move(fn);
  return m;
}

SemMorphism SemMorphism::from_sampler(std::vector<SemObject> dom, std::vector<SemObject> cod,
                                      std::function<Tuple(const Tuple&, Rng&)> fn) {
  SemMorphism m;
  m.dom = std::move(dom);
  m.cod = std::move(cod);
  m.body = BodyKind::Sampler;
  m.sampler = std::move(fn);
  return m;
}

SemMorphism make_kernel(std::vector<SemObject> dom, std::vector<SemObject> cod,
                        std::map<std::vector<std::int64_t>, std::vector<KernelRow>> rows) {
  for (const SemObject& o : dom)
    if (!o.is_finite()) throw domain_mismatch("kernel domain must be finite");
  for (const SemObject& o : cod)
    if (!o.is_finite()) throw domain_mismatch("kernel codomain must be finite");
  for (const auto& [key, outcomes] : rows) {
    double total = 0.0;
    for (const KernelRow& row : outcomes) {
      if (row.prob < 0.0) throw domain_mismatch("kernel probabilities must be nonnegative");
      total += row.prob;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw domain_mismatch("kernel row does not sum to 1 (got " + std::to_string(total) + ")");
  }
  SemMorphism m;
  m.dom = std::move(dom);
  m.cod = std::move(cod);
  m.body = SemMorphism::BodyKind::Kernel;
  m.kernel = std::move(rows);
  return m;
}

namespace {

// Flattens a finite-domain input tuple to the kernel key: one index per
// atomic finite component, depth-first.
void flatten_indices(const SemObject& obj, const Value& v, std::vector<std::int64_t>& out) {
  if (obj.kind == SemObject::Kind::FiniteSet) {
    out.push_back(v.index());
  } else if (obj.kind == SemObject::Kind::Product) {
    for (size_t i = 0; i < obj.parts.size(); ++i) flatten_indices(obj.parts[i], v.tuple()[i], out);
  } else {
    throw domain_mismatch("kernel input has a non-finite component");
  }
}

}  // namespace

Tuple sem_apply(const SemMorphism& m, const Tuple& input, Rng& rng) {
  if (input.size() != m.dom.size())
    throw domain_mismatch("sem_apply: expected " + std::to_string(m.dom.size()) + " inputs, got " +
                          std::to_string(input.size()));
  for (size_t i = 0; i < input.size(); ++i)
    if (!value_in(m.dom[i], input[i]))
      throw domain_mismatch("sem_apply: input " + std::to_string(i) + " = " +
                            value_to_string(input[i]) + " is outside the domain");

  Tuple out;
  switch (m.body) {
    case SemMorphism::BodyKind::Deterministic: out = m.det(input); break;
    case SemMorphism::BodyKind::Sampler: out = m.sampler(input, rng); break;
    case SemMorphism::BodyKind::Kernel: {
      std::vector<std::int64_t> key;
      for (size_t i = 0; i < input.size(); ++i) flatten_indices(m.dom[i], input[i], key);
      auto it = m.kernel.find(key);
      if (it == m.kernel.end()) throw domain_mismatch("kernel has no row for this input");
      // Degenerate rows need no draw, so deterministic kernels stay
      // bit-identical to their Deterministic encoding under any seed.
      size_t pick = 0;
      if (it->second.size() > 1) {
        double u = rng.uniform();
        double acc = 0.0;
        pick = it->second.size() - 1;
        for (size_t i = 0; i < it->second.size(); ++i) {
          acc += it->second[i].prob;
          if (u < acc) {
            pick = i;
            break;
          }
        }
      }
      out = it->second[pick].outcome;
      break;
    }
  }
  if (out.size() != m.cod.size()) throw domain_mismatch("sem_apply: body returned wrong arity");
  for (size_t i = 0; i < out.size(); ++i)
    if (!value_in(m.cod[i], out[i]))
      throw domain_mismatch("sem_apply: output " + std::to_string(i) + " is outside the codomain");
  return out;
}

// ---------------------------------------------------------------------------
// Diagram evaluation.

namespace {

Value merge_values(const SemObject& obj, const std::vector<Value>& vs) {
  Value acc = zero_value(obj);
  if (obj.kind != SemObject::Kind::RealSpace)
    throw uninterpretable_spider("merge is only additive on real spaces");
  Tensor& t = acc.tensor();
  for (const Value& v : vs) {
    const Tensor& x = v.tensor();
    if (x.shape != t.shape) throw shape_mismatch("merge over mismatched shapes");
    for (size_t i = 0; i < t.data.size(); ++i) t.data[i] += x.data[i];
  }
  return acc;
}

}  // namespace

Tuple eval_diagram(const OpenHypergraph& d, const Interpretation& interp, const Tuple& inputs,
                   Rng& rng) {
  d.check();
  const int nw = static_cast<int>(d.wires.size());
  const int ne = static_cast<int>(d.edges.size());
  if (inputs.size() != d.boundary_in.size())
    throw domain_mismatch("eval_diagram: expected " + std::to_string(d.boundary_in.size()) +
                          " inputs, got " + std::to_string(inputs.size()));

  auto object_of = [&](WireId w) -> const SemObject& {
    auto it = interp.types.find(d.wires[w].name);
    if (it == interp.types.end())
      throw undeclared_symbol("no interpretation for type '" + d.wires[w].name + "'");
    return it->second;
  };

  // One value slot per wire; a wire is final once all its producers (boundary
  // positions and edge outputs) have contributed. Multiple producers merge
  // additively; zero producers read as the additive unit.
  std::vector<int> producers(nw, 0);
  for (WireId w : d.boundary_in) producers[w]++;
  for (const DiagramEdge& e : d.edges)
    for (WireId w : e.out_ports) producers[w]++;

  std::vector<std::vector<Value>> contributions(nw);
  std::vector<bool> final_(nw, false);
  std::vector<int> pending(ne, 0);
  // consumers[w] = edge ids that read w (one entry per port).
  std::vector<std::vector<int>> consumers(nw);
  for (int ei = 0; ei < ne; ++ei) {
    pending[ei] = static_cast<int>(d.edges[ei].in_ports.size());
    for (WireId w : d.edges[ei].in_ports) consumers[w].push_back(ei);
  }

  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  std::vector<Value> value(nw);

  auto finalize = [&](WireId w) {
    const SemObject& obj = object_of(w);
    if (producers[w] == 0) {
      if (obj.kind != SemObject::Kind::RealSpace ||
          !interp.additive.count(d.wires[w].name))
        throw uninterpretable_spider("type '" + d.wires[w].name +
                                     "' has no unit: wire " + std::to_string(w) +
                                     " is never produced");
      value[w] = zero_value(obj);
    } else if (producers[w] == 1) {
      value[w] = contributions[w][0];
    } else {
      if (obj.kind != SemObject::Kind::RealSpace ||
          !interp.additive.count(d.wires[w].name))
        throw uninterpretable_spider("type '" + d.wires[w].name +
                                     "' has no merge: wire " + std::to_string(w) +
                                     " is produced " + std::to_string(producers[w]) + " times");
      value[w] = merge_values(obj, contributions[w]);
    }
    final_[w] = true;
    for (int ei : consumers[w])
      if (--pending[ei] == 0) ready.push(ei);
  };

  auto contribute = [&](WireId w, Value v) {
    if (!value_in(object_of(w), v))
      throw domain_mismatch("value on wire " + std::to_string(w) + " is outside its type '" +
                            d.wires[w].name + "'");
    contributions[w].push_back(std::move(v));
    if (static_cast<int>(contributions[w].size()) == producers[w]) finalize(w);
  };

  for (int ei = 0; ei < ne; ++ei)
    if (pending[ei] == 0) ready.push(ei);
  for (WireId w = 0; w < nw; ++w)
    if (producers[w] == 0) finalize(w);
  for (size_t i = 0; i < d.boundary_in.size(); ++i) contribute(d.boundary_in[i], inputs[i]);

  int fired = 0;
  while (!ready.empty()) {
    int ei = ready.top();
    ready.pop();
    const DiagramEdge& e = d.edges[ei];
    auto git = interp.gens.find(e.label.name);
    if (git == interp.gens.end())
      throw undeclared_symbol("no interpretation for generator '" + e.label.name + "'");
    Tuple in;
    for (WireId w : e.in_ports) in.push_back(value[w]);
    Tuple out = sem_apply(git->second, in, rng);
    for (size_t i = 0; i < e.out_ports.size(); ++i) contribute(e.out_ports[i], out[i]);
    ++fired;
  }
  if (fired != ne)
    throw Error("CyclicDiagram", "diagram has feedback; evaluation needs an acyclic dataflow");

  Tuple outputs;
  for (WireId w : d.boundary_out) {
    if (!final_[w]) throw Error("CyclicDiagram", "boundary output depends on a cycle");
    outputs.push_back(value[w]);
  }
  return outputs;
}

// ---------------------------------------------------------------------------
// Agents.

double Agent::hp(const std::string& key, double fallback) const {
  auto it = hyperparams.find(key);
  return it == hyperparams.end() ? fallback : it->second;
}

namespace {

const SemObject* lookup_object(const Interpretation& interp, const std::string& type) {
  auto it = interp.types.find(type);
  return it == interp.types.end() ? nullptr : &it->second;
}

void check_layer(Verdict& v, const std::string& layer, const HypergraphPresentation& p,
                 const Interpretation& interp) {
  for (const TypeSymbol& t : p.types)
    if (!interp.types.count(t.name)) {
      v.status = Verdict::Status::fail;
      v.note(layer + ": type '" + t.name + "' has no interpretation");
    }
  for (const GeneratorSymbol& g : p.generators) {
    auto it = interp.gens.find(g.name);
    if (it == interp.gens.end()) {
      v.status = Verdict::Status::fail;
      v.note(layer + ": generator '" + g.name + "' has no interpretation");
      continue;
    }
    const SemMorphism& m = it->second;
    auto profile_ok = [&](const TypeProfile& profile, const std::vector<SemObject>& objs) {
      if (profile.size() != objs.size()) return false;
      for (size_t i = 0; i < profile.size(); ++i) {
        const SemObject* o = lookup_object(interp, profile[i].name);
        if (!o || !(*o == objs[i])) return false;
      }
      return true;
    };
    if (!profile_ok(g.dom, m.dom) || !profile_ok(g.cod, m.cod)) {
      v.status = Verdict::Status::fail;
      v.note(layer + ": interpretation of '" + g.name + "' does not match its profile");
    }
  }
}

}  // namespace

Verdict agent_validate(const Agent& agent) {
  Verdict v = Verdict::passed();
  if (!agent.arch) {
    v.status = Verdict::Status::fail;
    v.note("agent has no architecture");
    return v;
  }
  const Architecture& arch = *agent.arch;
  check_layer(v, "I", arch.syn, agent.I);
  check_layer(v, "J", arch.know, agent.J);

  // Carrier translations: every supported pair whose syntax type occurs in
  // the profile of a knowledge-compatible generator needs an R.
  GeneratorPartition part = knowledge_compatible_generators(arch);
  std::set<std::string> touched;
  for (const std::string& gname : part.compatible)
    if (const GeneratorSymbol* g = arch.syn.find_generator(gname)) {
      for (const TypeSymbol& t : g->dom) touched.insert(t.name);
      for (const TypeSymbol& t : g->cod) touched.insert(t.name);
    }
  for (const auto& [s, k] : arch.iface.support)
    if (touched.count(s.name) && !agent.carriers.count({s.name, k.name})) {
      v.status = Verdict::Status::fail;
      v.note("no carrier translation R for supported pair (" + s.name + ", " + k.name + ")");
    }
  if (v.ok()) v.note("agent '" + agent.name + "' well-formed");
  return v;
}

// ---------------------------------------------------------------------------
// Interface compatibility.

namespace {

struct SideMatch {
  // For binding component j: matched generator component index, or -1.
  std::vector<int> gen_of_binding;
  bool total = true;  // every binding component found a partner
};

// Pairs each knowledge-side boundary component with the first unused
// generator component its type is supported against (order-free: the causal
// update lists its carriers in a different order than the syntax side).
SideMatch match_side(const Architecture& arch, const TypeProfile& gen_side,
                     const TypeProfile& binding_side) {
  SideMatch m;
  std::vector<bool> used(gen_side.size(), false);
  for (const TypeSymbol& k : binding_side) {
    int found = -1;
    for (size_t i = 0; i < gen_side.size(); ++i)
      if (!used[i] && arch.iface.pair_supported(gen_side[i], k)) {
        found = static_cast<int>(i);
        used[i] = true;
        break;
      }
    m.gen_of_binding.push_back(found);
    if (found < 0) m.total = false;
  }
  return m;
}

const std::function<Value(const Value&)>* carrier_fn(const Agent& agent, const std::string& s,
                                                     const std::string& k) {
  auto it = agent.carriers.find({s, k});
  return it == agent.carriers.end() ? nullptr : &it->second;
}

}  // namespace

Verdict interface_compat_check(const Agent& agent, CompatMode mode, int samples, double tol,
                               Rng& rng) {
  Verdict v = Verdict::passed();
  const Architecture& arch = *agent.arch;
  GeneratorPartition part = knowledge_compatible_generators(arch);
  double worst = 0.0;
  bool evaluable = true;

  for (const std::string& gname : part.compatible) {
    const GeneratorSymbol* g = arch.syn.find_generator(gname);
    auto bit = arch.iface.bindings.find(gname);
    if (bit == arch.iface.bindings.end())
      throw missing_binding("knowledge-compatible generator '" + gname + "' has no binding");
    const OpenHypergraph& binding = bit->second;

    auto iit = agent.I.gens.find(gname);
    if (iit == agent.I.gens.end()) {
      v.status = Verdict::Status::fail;
      v.note("no interpretation for '" + gname + "'");
      continue;
    }
    const SemMorphism& ig = iit->second;

    SideMatch in_match = match_side(arch, g->dom, binding.boundary_in_types());
    SideMatch out_match = match_side(arch, g->cod, binding.boundary_out_types());
    if (!in_match.total || !out_match.total) {
      v.status = Verdict::Status::not_evaluable;
      v.note("binding of '" + gname + "' does not align with the generator profile");
      evaluable = false;
      continue;
    }
    TypeProfile binding_in = binding.boundary_in_types();
    TypeProfile binding_out = binding.boundary_out_types();
    std::vector<const std::function<Value(const Value&)>*> r_in, r_out;
    bool have_r = true;
    for (size_t j = 0; j < binding_in.size(); ++j) {
      const std::string& s = g->dom[in_match.gen_of_binding[j]].name;
      r_in.push_back(carrier_fn(agent, s, binding_in[j].name));
      if (!r_in.back()) have_r = false;
    }
    for (size_t j = 0; j < binding_out.size(); ++j) {
      const std::string& s = g->cod[out_match.gen_of_binding[j]].name;
      r_out.push_back(carrier_fn(agent, s, binding_out[j].name));
      if (!r_out.back()) have_r = false;
    }
    if (!have_r) {
      v.status = Verdict::Status::fail;
      v.note("missing carrier translation for '" + gname + "'");
      continue;
    }

    // Input space over I(dom): enumerate when finite, sample otherwise.
    bool finite = std::all_of(ig.dom.begin(), ig.dom.end(),
                              [](const SemObject& o) { return o.is_finite(); });
    long long count = samples;
    if (finite) {
      long long card = 1;
      for (const SemObject& o : ig.dom) card *= o.cardinality();
      if (card <= 4096) count = card; else finite = false;
    }

    double local = 0.0;
    for (long long n = 0; n < count; ++n) {
      Tuple x;
      if (finite) {
        long long flat = n;
        for (size_t i = ig.dom.size(); i-- > 0;) {
          long long card = ig.dom[i].cardinality();
          x.insert(x.begin(), element_of(ig.dom[i], flat % card));
          flat /= card;
        }
      } else {
        for (const SemObject& o : ig.dom) x.push_back(random_value(o, rng));
      }
      // Left leg: R(I(g)(x)), on the matched output components.
      Rng left = rng.split();
      Rng right = left;  // identical stream for stochastic bodies
      Tuple ix = sem_apply(ig, x, left);
      Tuple lhs;
      for (size_t j = 0; j < binding_out.size(); ++j)
        lhs.push_back((*r_out[j])(ix[out_match.gen_of_binding[j]]));
      // Right leg: J(k_g)(R(x)), inputs rearranged to the binding's order.
      Tuple rx;
      for (size_t j = 0; j < binding_in.size(); ++j)
        rx.push_back((*r_in[j])(x[in_match.gen_of_binding[j]]));
      Tuple rhs = eval_diagram(binding, agent.J, rx, right);
      for (size_t j = 0; j < lhs.size(); ++j)
        local = std::max(local, value_distance(lhs[j], rhs[j]));
    }
    worst = std::max(worst, local);
    v.note("generator '" + gname + "': residual " + std::to_string(local) + " over " +
           std::to_string(count) + (finite ? " enumerated" : " sampled") + " inputs");
  }

  v.residual("interface_residual", worst);
  if (mode == CompatMode::residual) {
    if (v.status == Verdict::Status::pass) v.status = Verdict::Status::not_evaluable;
    v.note("residual mode: equality not asserted");
  } else if (evaluable && v.status == Verdict::Status::pass && worst > tol) {
    v.status = Verdict::Status::fail;
    v.note("exact mode: residual " + std::to_string(worst) + " exceeds tol " + std::to_string(tol));
  }
  return v;
}

// ---------------------------------------------------------------------------
// Constraint evaluation.

namespace {

std::string param_or(const Constraint& rho, const std::string& key, const std::string& fallback) {
  auto it = rho.params.find(key);
  return it == rho.params.end() ? fallback : it->second;
}

double param_num(const Constraint& rho, const std::string& key, double fallback) {
  auto it = rho.params.find(key);
  return it == rho.params.end() ? fallback : std::stod(it->second);
}

// The trained carrier value used by FixedPoint/PolicyValueCompat: tabular
// agents run Q-learning, neural agents run TD steps and tabulate through R.
Tensor learned_q_tensor(const Agent& agent, Rng& rng);

Verdict eval_representability(const Agent& agent, const Constraint& rho) {
  Verdict v = Verdict::passed();
  std::string carrier = param_or(rho, "carrier", "");
  auto it = agent.J.types.find(carrier);
  if (it == agent.J.types.end()) {
    v.status = Verdict::Status::fail;
    v.note("knowledge type '" + carrier + "' is uninterpreted");
    return v;
  }
  int ns = 0, na = 0;
  if (agent.env) {
    ns = agent.env->n_states();
    na = agent.env->n_actions();
  } else if (agent.history_env) {
    ns = agent.history_env->n_states();
    na = agent.history_env->n_actions();
  } else {
    v.status = Verdict::Status::not_evaluable;
    v.note("no environment to size the table against");
    return v;
  }
  const SemObject& o = it->second;
  if (o.kind == SemObject::Kind::RealSpace && o.shape == std::vector<int>{ns, na}) {
    v.note("J(" + carrier + ") = R^{" + std::to_string(ns) + "x" + std::to_string(na) + "}");
  } else {
    v.status = Verdict::Status::fail;
    v.note("J(" + carrier + ") is not the R^{|S|x|A|} table space");
  }
  return v;
}

Verdict eval_fixed_point(const Agent& agent, const Constraint& rho, Rng& rng) {
  Verdict v = Verdict::passed();
  if (!agent.env) {
    v.status = Verdict::Status::not_evaluable;
    v.note("fixed-point check needs a finite-kernel environment");
    return v;
  }
  const EnvSpec& env = *agent.env;
  double gamma = param_num(rho, "gamma", env.gamma);
  if (std::abs(gamma - env.gamma) > 1e-12) {
    v.status = Verdict::Status::fail;
    v.note("constraint gamma " + std::to_string(gamma) + " differs from environment gamma " +
           std::to_string(env.gamma));
    return v;
  }
  double tol = param_num(rho, "tol", 0.05);
  int max_iter = static_cast<int>(param_num(rho, "max_iter", 100000));
  double vi_tol = param_num(rho, "vi_tol", 1e-10);

  QTable q_star = value_iteration(env, vi_tol, max_iter);
  Tensor learned = learned_q_tensor(agent, rng);
  double dist = q_distance(q_from_tensor(learned), q_star);
  v.residual("bellman_distance", dist);
  if (dist <= tol) {
    v.note("learned table within " + std::to_string(dist) + " of the Bellman fixed point (tol " +
           std::to_string(tol) + ")");
  } else {
    v.status = Verdict::Status::fail;
    v.note("learned table is " + std::to_string(dist) + " from the Bellman fixed point (tol " +
           std::to_string(tol) + ")");
  }
  return v;
}

Verdict eval_policy_value(const Agent& agent, const Constraint& rho, Rng& rng) {
  Verdict v = Verdict::passed();
  std::string policy = param_or(rho, "policy", "Policy");
  auto it = agent.I.gens.find(policy);
  if (it == agent.I.gens.end()) {
    v.status = Verdict::Status::fail;
    v.note("policy generator '" + policy + "' is uninterpreted");
    return v;
  }
  const SemMorphism& pol = it->second;
  if (pol.dom.size() != 2 || pol.dom[0].kind != SemObject::Kind::FiniteSet) {
    v.status = Verdict::Status::not_evaluable;
    v.note("policy does not take (state, parameters)");
    return v;
  }
  int ns = static_cast<int>(pol.dom[0].labels.size());

  // Greedy membership must hold at the trained table and at random tables:
  // the claim is about the declared morphism, not about convergence.
  std::vector<std::pair<std::string, Tensor>> probes;
  if (agent.env) probes.emplace_back("trained", learned_q_tensor(agent, rng));
  for (int k = 0; k < 8; ++k) {
    Value random_q = random_value(pol.dom[1], rng);
    if (!random_q.is_tensor()) {
      v.status = Verdict::Status::not_evaluable;
      v.note("parameter carrier is not a table space");
      return v;
    }
    probes.emplace_back("random#" + std::to_string(k), random_q.tensor());
  }

  for (const auto& [tag, q] : probes) {
    if (q.shape.size() != 2 || q.shape[0] != ns) {
      v.status = Verdict::Status::not_evaluable;
      v.note("carrier table shape does not index states");
      return v;
    }
    int na = q.shape[1];
    for (int s = 0; s < ns; ++s) {
      Tuple out = sem_apply(pol, Tuple{Value{s}, Value{q}}, rng);
      int a = static_cast<int>(out[0].index());
      double best = q.at({s, 0});
      for (int u = 1; u < na; ++u) best = std::max(best, q.at({s, u}));
      if (q.at({s, a}) < best - 1e-12) {
        v.status = Verdict::Status::fail;
        v.note(tag + ": policy(" + std::to_string(s) + ") = action " + std::to_string(a) +
               " is not an argmax");
        return v;
      }
    }
  }
  v.note("policy action is argmax at every state (" + std::to_string(probes.size()) + " tables)");
  return v;
}

Verdict eval_markov(const Agent& agent, const Constraint& rho) {
  Verdict v = Verdict::passed();
  std::string gen = param_or(rho, "interaction_generator", "EnvInteraction");
  if (agent.env) {
    v.note("interaction '" + gen + "' is a finite kernel indexed by (s, a) only: Markov by construction");
    return v;
  }
  if (!agent.history_env) {
    v.status = Verdict::Status::not_evaluable;
    v.note("no environment attached");
    return v;
  }
  // Adversarial probe: two histories ending at the same (s, a) must induce
  // identical kernel rows. Enumerate histories up to the probe window.
  const HistoryEnv& env = *agent.history_env;
  const int ns = env.n_states(), na = env.n_actions();
  std::vector<std::vector<std::pair<int, int>>> histories{{}};
  for (int len = 1; len <= env.probe_window; ++len) {
    std::vector<std::vector<std::pair<int, int>>> next;
    for (const auto& h : histories)
      if (static_cast<int>(h.size()) == len - 1)
        for (int s = 0; s < ns; ++s)
          for (int a = 0; a < na; ++a) {
            auto h2 = h;
            h2.emplace_back(s, a);
            next.push_back(std::move(h2));
          }
    histories.insert(histories.end(), next.begin(), next.end());
  }
  auto show = [&](const std::vector<std::pair<int, int>>& h) {
    std::string s = "[";
    for (size_t i = 0; i < h.size(); ++i)
      s += (i ? " " : "") + ("(" + env.states[h[i].first] + "," + env.actions[h[i].second] + ")");
    return s + "]";
  };
  for (int s = 0; s < ns; ++s)
    for (int a = 0; a < na; ++a) {
      std::vector<EnvRow> base = env.kernel(histories[0], s, a);
      for (size_t i = 1; i < histories.size(); ++i) {
        std::vector<EnvRow> rows = env.kernel(histories[i], s, a);
        if (!(rows == base)) {
          v.status = Verdict::Status::fail;
          v.note("witness: at (" + env.states[s] + "," + env.actions[a] + ") histories " +
                 show(histories[0]) + " and " + show(histories[i]) +
                 " induce different kernels");
          return v;
        }
      }
    }
  v.note("kernel rows agree across all " + std::to_string(histories.size()) +
         " probed histories (window " + std::to_string(env.probe_window) + ")");
  return v;
}

Verdict eval_ontological(const Agent& agent, const Constraint& rho) {
  Verdict v = Verdict::passed();
  std::string type = param_or(rho, "type", "");
  std::string factors = param_or(rho, "factors", "");
  const SemObject* o = nullptr;
  if (auto it = agent.I.types.find(type); it != agent.I.types.end()) o = &it->second;
  if (auto it = agent.J.types.find(type); !o && it != agent.J.types.end()) o = &it->second;
  if (!o) {
    v.status = Verdict::Status::fail;
    v.note("type '" + type + "' is uninterpreted");
    return v;
  }
  std::vector<std::string> names;
  std::string cur;
  for (char c : factors + ",") {
    if (c == ',') {
      if (!cur.empty()) names.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (o->kind != SemObject::Kind::Product || o->parts.size() != names.size()) {
    v.status = Verdict::Status::fail;
    v.note("interpretation of '" + type + "' does not factor into " +
           std::to_string(names.size()) + " parts");
    return v;
  }
  for (size_t i = 0; i < names.size(); ++i) {
    const SemObject* f = nullptr;
    if (auto it = agent.I.types.find(names[i]); it != agent.I.types.end()) f = &it->second;
    if (auto it = agent.J.types.find(names[i]); !f && it != agent.J.types.end()) f = &it->second;
    if (!f || !(*f == o->parts[i])) {
      v.status = Verdict::Status::fail;
      v.note("factor " + std::to_string(i) + " does not match '" + names[i] + "'");
      return v;
    }
  }
  v.note("'" + type + "' factors as " + factors);
  return v;
}

}  // namespace

Verdict constraint_evaluate(const Agent& agent, const Constraint& rho, Rng& rng) {
  Verdict v;
  switch (rho.kind) {
    case ConstraintKind::Representability: v = eval_representability(agent, rho); break;
    case ConstraintKind::FixedPoint: v = eval_fixed_point(agent, rho, rng); break;
    case ConstraintKind::PolicyValueCompat: v = eval_policy_value(agent, rho, rng); break;
    case ConstraintKind::MarkovFactorization: v = eval_markov(agent, rho); break;
    case ConstraintKind::OntologicalFactorization: v = eval_ontological(agent, rho); break;
    case ConstraintKind::Unchecked: {
      v = Verdict{};
      v.status = Verdict::Status::not_evaluable;
      auto it = rho.params.find("prose");
      v.note(it == rho.params.end() ? std::string("prose-only restriction")
                                    : "prose-only restriction: " + it->second);
      break;
    }
  }
  v.note("constraint '" + rho.id + "' (" + to_string(rho.kind) + "): " + to_string(v.status));
  return v;
}

Verdict admissibility_check(const Agent& agent, Rng& rng) {
  Verdict total = Verdict::passed();
  Verdict shape = agent_validate(agent);
  total = combine_blocking(total, shape);
  if (shape.status == Verdict::Status::fail) return total;

  try {
    Rng r = rng.split();
    Verdict compat = interface_compat_check(agent, CompatMode::exact, 64,
                                            agent.hp("tol", 1e-9), r);
    total = combine_blocking(total, compat);
  } catch (const Error& e) {
    total.status = Verdict::Status::fail;
    total.note(std::string(e.kind()) + ": " + e.what());
  }
  for (const Constraint& rho : agent.arch->constraints) {
    Rng r = rng.split();
    total = combine_blocking(total, constraint_evaluate(agent, rho, r));
  }
  total.note(std::string("admissibility: ") + to_string(total.status));
  return total;
}

// ---------------------------------------------------------------------------
// Reindexing.

Agent reindex_agent(const ArchMorphism& f, const Architecture& a, const Agent& agent_b) {
  Agent out;
  out.name = agent_b.name + " along " + f.name;
  out.arch = std::make_shared<Architecture>(a);
  out.hyperparams = agent_b.hyperparams;
  out.env = agent_b.env;
  out.history_env = agent_b.history_env;

  auto build_layer = [](const std::map<std::string, std::string>& type_map,
                        const std::map<std::string, OpenHypergraph>& gen_map,
                        const HypergraphPresentation& pres, const Interpretation& base) {
    // Closures own a snapshot of B's interpretation so the reindexed agent
    // outlives agent_b.
    auto base_copy = std::make_shared<const Interpretation>(base);
    Interpretation layer;
    for (const auto& [t, bt] : type_map) {
      auto it = base_copy->types.find(bt);
      if (it == base_copy->types.end())
        throw undeclared_symbol("reindex: target type '" + bt + "' is uninterpreted");
      layer.types[t] = it->second;
      if (base_copy->additive.count(bt)) layer.additive.insert(t);
    }
    for (const auto& [gname, image] : gen_map) {
      const GeneratorSymbol* g = pres.find_generator(gname);
      if (!g) continue;
      std::vector<SemObject> dom, cod;
      for (const TypeSymbol& t : g->dom) dom.push_back(layer.types.at(t.name));
      for (const TypeSymbol& t : g->cod) cod.push_back(layer.types.at(t.name));
      OpenHypergraph img = image;
      layer.gens[gname] = SemMorphism::from_sampler(
          std::move(dom), std::move(cod), [img, base_copy](const Tuple& in, Rng& rng) {
            return eval_diagram(img, *base_copy, in, rng);
          });
    }
    return layer;
  };
  out.I = build_layer(f.type_map_syn, f.gen_map_syn, a.syn, agent_b.I);
  out.J = build_layer(f.type_map_know, f.gen_map_know, a.know, agent_b.J);

  for (const auto& [s, k] : a.iface.support) {
    auto si = f.type_map_syn.find(s.name);
    auto ki = f.type_map_know.find(k.name);
    if (si == f.type_map_syn.end() || ki == f.type_map_know.end()) continue;
    auto it = agent_b.carriers.find({si->second, ki->second});
    if (it != agent_b.carriers.end()) out.carriers[{s.name, k.name}] = it->second;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Interaction traces.

std::vector<TraceStep> run_trace(const Agent& agent, int steps, Rng& rng) {
  if (!agent.env) throw domain_mismatch("run_trace needs a finite-kernel environment");
  const Architecture& arch = *agent.arch;
  const GeneratorSymbol* policy = arch.syn.find_generator("Policy");
  const GeneratorSymbol* interaction = arch.syn.find_generator("EnvInteraction");
  const GeneratorSymbol* update = arch.syn.find_generator("Update");
  if (!policy || !interaction || !update)
    throw unknown_name("run_trace expects Policy/EnvInteraction/Update generators");
  const SemMorphism& ipol = agent.I.gens.at("Policy");
  const SemMorphism& ienv = agent.I.gens.at("EnvInteraction");
  const SemMorphism& iupd = agent.I.gens.at("Update");

  // Carrier starts at the additive zero of its interpretation.
  const std::string carrier = policy->dom.back().name;
  Value theta = zero_value(agent.I.types.at(carrier));

  std::vector<TraceStep> trace;
  int s = agent.env->start_state;
  for (int n = 0; n < steps; ++n) {
    Tuple a_out = sem_apply(ipol, Tuple{Value{s}, theta}, rng);
    int a = static_cast<int>(a_out[0].index());
    Tuple e_out = sem_apply(ienv, Tuple{Value{s}, Value{a}}, rng);
    const Value& e = e_out[0];
    theta = sem_apply(iupd, Tuple{theta, e}, rng)[0];
    int s_next = static_cast<int>(e.tuple()[3].index());
    trace.push_back(TraceStep{s, a, e.tuple()[2].real(), s_next});
    s = agent.env->absorbing(s_next) ? agent.env->start_state : s_next;
  }
  return trace;
}

// ---------------------------------------------------------------------------

namespace {

Tensor learned_q_tensor(const Agent& agent, Rng& rng) {
  const EnvSpec& env = *agent.env;
  long long steps = static_cast<long long>(agent.hp("steps", 200000));
  double alpha = agent.hp("alpha", 0.1);
  double epsilon = agent.hp("epsilon", 0.2);
  Rng train(static_cast<uint64_t>(agent.hp("seed", 1)));
  (void)rng;
  if (agent.hp("neural", 0) > 0.5) {
    int width = static_cast<int>(agent.hp("width", 32));
    MLPParams p = MLPParams::random(env.n_states() + env.n_actions(), width, train);
    QTable q(env.n_states(), env.n_actions());
    int s = env.start_state;
    for (long long n = 0; n < steps; ++n) {
      q = mlp_tabulate(p, env.n_states(), env.n_actions());
      int a = train.uniform() < epsilon ? static_cast<int>(train.below(env.n_actions()))
                                        : greedy_policy(q, s);
      EnvRow row = env.sample(s, a, train);
      p = mlp_td_step(p, Experience{s, a, row.r, row.s_next}, alpha, env.gamma, env.n_states(),
                      env.n_actions());
      s = env.absorbing(row.s_next) ? env.start_state : row.s_next;
    }
    return q_to_tensor(mlp_tabulate(p, env.n_states(), env.n_actions()));
  }
  return q_to_tensor(run_q_learning(env, steps, alpha, epsilon, train));
}

}  // namespace

}  // namespace agentarch
