#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "agentarch/archcat.hpp"
#include "agentarch/env.hpp"
#include "agentarch/rng.hpp"
#include "agentarch/value.hpp"
#include "agentarch/verdict.hpp"

namespace agentarch {

// Semantic universe: finite sets, Euclidean parameter spaces, and finite
// products of those (products carry tuple values, e.g. an experience
// (s, a, r, s')).
struct SemObject {
  enum class Kind { FiniteSet, RealSpace, Product };
  Kind kind = Kind::FiniteSet;
  std::vector<std::string> labels;   // FiniteSet: distinct labels
  std::vector<int> shape;            // RealSpace: dims >= 1
  std::vector<SemObject> parts;      // Product

  static SemObject finite(std::vector<std::string> labels);
  static SemObject real_space(std::vector<int> shape);
  static SemObject product(std::vector<SemObject> parts);

  bool is_finite() const;  // FiniteSet or Product of finite parts
  // Number of elements of a finite object.
  long long cardinality() const;
  bool operator==(const SemObject&) const = default;
};

// True when v is an element of obj (index in range, matching tensor shape...).
bool value_in(const SemObject& obj, const Value& v);
// The additive zero of a RealSpace (or product of RealSpaces).
Value zero_value(const SemObject& obj);
// Element of a finite object by flat index (mixed-radix over parts).
Value element_of(const SemObject& obj, long long flat);
// Uniform random element: finite parts uniform, real parts i.i.d. U(-1, 1).
Value random_value(const SemObject& obj, Rng& rng);

struct KernelRow {
  Tuple outcome;
  double prob = 0.0;
};

// A morphism of the semantic universe. Deterministic bodies ignore the RNG;
// kernels are row-stochastic tables over finite dom/cod; samplers draw from
// the RNG explicitly.
struct SemMorphism {
  enum class BodyKind { Deterministic, Kernel, Sampler };
  std::vector<SemObject> dom, cod;
  BodyKind body = BodyKind::Deterministic;
  std::function<Tuple(const Tuple&)> det;
  std::map<std::vector<std::int64_t>, std::vector<KernelRow>> kernel;
  std::function<Tuple(const Tuple&, Rng&)> sampler;

  static SemMorphism deterministic(std::vector<SemObject> dom, std::vector<SemObject> cod,
                                   std::function<Tuple(const Tuple&)> fn);
  static SemMorphism from_sampler(std::vector<SemObject> dom, std::vector<SemObject> cod,
                                  std::function<Tuple(const Tuple&, Rng&)> fn);
};

// Validates dom/cod finiteness and that every row sums to 1 +-1e-9.
SemMorphism make_kernel(std::vector<SemObject> dom, std::vector<SemObject> cod,
                        std::map<std::vector<std::int64_t>, std::vector<KernelRow>> rows);

// Applies m to an input tuple. Throws DomainMismatch when the input does not
// inhabit dom; output inhabits cod.
Tuple sem_apply(const SemMorphism& m, const Tuple& input, Rng& rng);

// How to read a layer's symbols during diagram evaluation. `additive` lists
// type names whose RealSpace carries a monoid: unit reads as zero and merge
// as addition; copy and discard are always available.
struct Interpretation {
  std::map<std::string, SemObject> types;
  std::map<std::string, SemMorphism> gens;
  std::set<std::string> additive;
};

// Evaluates an acyclic diagram as a dataflow graph: one value per wire,
// edges fire in dependency order (ties by edge id, so runs are reproducible
// for a fixed seed). Throws UninterpretableSpider for a merge/unit on a
// non-additive type and CyclicDiagram for feedback.
Tuple eval_diagram(const OpenHypergraph& d, const Interpretation& interp, const Tuple& inputs,
                   Rng& rng);

// An agent: interpretations I (syntax) and J (knowledge) plus the carrier
// translations R and the environment it is meant to run against. Immutable
// description; training state lives inside constraint evaluation sessions.
struct Agent {
  std::string name;
  std::shared_ptr<const Architecture> arch;
  Interpretation I, J;
  // R per supported carrier pair (syntax type, knowledge type).
  std::map<std::pair<std::string, std::string>, std::function<Value(const Value&)>> carriers;
  std::map<std::string, double> hyperparams;
  std::shared_ptr<const EnvSpec> env;
  std::shared_ptr<const HistoryEnv> history_env;

  double hp(const std::string& key, double fallback) const;
};

// I and J cover the declared symbols with matching dom/cod profiles; every
// supported carrier pair touched by a knowledge-compatible generator has an R.
Verdict agent_validate(const Agent& agent);

enum class CompatMode { exact, residual };

// Checks "I(g) is induced by J(k_g)" for every knowledge-compatible
// generator g: R(I(g)(x)) = J(binding of g)(R(x)) on enumerated (finite) or
// sampled inputs. Exact mode passes iff the worst residual is <= tol;
// residual mode never fails, it reports the residual as not_evaluable.
// Throws MissingBinding when a compatible generator has no binding.
Verdict interface_compat_check(const Agent& agent, CompatMode mode, int samples, double tol,
                               Rng& rng);

// Dispatches on the constraint kind; Unchecked yields not_evaluable.
Verdict constraint_evaluate(const Agent& agent, const Constraint& rho, Rng& rng);

// Conjunction of the exact interface check and every constraint verdict;
// not_evaluable verdicts are reported but non-blocking.
Verdict admissibility_check(const Agent& agent, Rng& rng);

// Transports an agent over B to one over A along F : A -> B by precomposition:
// each A-generator is interpreted by evaluating its image diagram under B's
// interpretation.
Agent reindex_agent(const ArchMorphism& f, const Architecture& a, const Agent& agent_b);

struct TraceStep {
  int s = 0, a = 0;
  double r = 0.0;
  int s_next = 0;

  bool operator==(const TraceStep&) const = default;
};

// Runs the interaction loop of an RL-shaped agent (generators Policy,
// EnvInteraction, Update over types S, A, E and one parameter carrier):
// a = Policy(s, theta); e ~ EnvInteraction(s, a); theta' = Update(theta, e);
// the episode resets to the start state after entering an absorbing state.
std::vector<TraceStep> run_trace(const Agent& agent, int steps, Rng& rng);

}  // namespace agentarch
