// Acceptance gate: eight end-to-end criteria, one [PASS]/[FAIL] line each.
// Exit code 0 only when every criterion passes. Tolerances are pinned here,
// in code, next to the checks that use them.

#include <cctype>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "agentarch/archcat.hpp"
#include "agentarch/corpus.hpp"
#include "agentarch/diagram.hpp"
#include "agentarch/dsl.hpp"
#include "agentarch/errors.hpp"
#include "agentarch/rl.hpp"
#include "agentarch/rng.hpp"
#include "agentarch/semantics.hpp"
#include "equiv.hpp"
#include "helpers.hpp"

using namespace agentarch;
using testutil::read_file;
using testutil::src_path;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

TypeProfile profile_of(const OpenHypergraph& d, const std::vector<WireId>& boundary) {
  TypeProfile p;
  for (WireId w : boundary) p.push_back(d.wires[w]);
  return p;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// --- C1: categorical laws on random diagrams -------------------------------

Outcome c1_diagram_laws() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(12345);
  const int kTrials = 500;  // >= 500 random composable diagrams, <= 6 edges each
  for (int trial = 0; trial < kTrials; ++trial) {
    OpenHypergraph f = testutil::random_diagram(rng, 6);
    TypeProfile pf = profile_of(f, f.boundary_out);
    OpenHypergraph g = testutil::random_diagram(rng, 6, &pf);
    TypeProfile pg = profile_of(g, g.boundary_out);
    OpenHypergraph h = testutil::random_diagram(rng, 6, &pg);

    if (!og_equal(og_compose(og_compose(f, g), h), og_compose(f, og_compose(g, h))))
      return {false, "associativity failed at trial " + std::to_string(trial)};
    TypeProfile in_f = profile_of(f, f.boundary_in);
    if (!og_equal(og_compose(og_identity(in_f), f), f))
      return {false, "left identity failed at trial " + std::to_string(trial)};
    if (!og_equal(og_compose(f, og_identity(pf)), f))
      return {false, "right identity failed at trial " + std::to_string(trial)};

    OpenHypergraph f2 = testutil::random_diagram(rng, 6);
    TypeProfile pf2 = profile_of(f2, f2.boundary_out);
    OpenHypergraph g2 = testutil::random_diagram(rng, 6, &pf2);
    if (!og_equal(og_compose(og_tensor(f, f2), og_tensor(g, g2)),
                  og_tensor(og_compose(f, g), og_compose(f2, g2))))
      return {false, "interchange failed at trial " + std::to_string(trial)};
  }
  const double secs = elapsed_s(t0);
  if (secs >= 30.0) return {false, "time budget exceeded: " + fmt(secs) + "s >= 30s"};
  return {true, std::to_string(kTrials) + " composable triples in " + fmt(secs) + "s"};
}

// --- C2: support tables, partition, loop census -----------------------------

Outcome c2_interface_census() {
  for (const std::string name : {"RL", "CRL", "SBL", "AIXI"}) {
    std::string lower;
    for (char c : name) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const std::string want = read_file(src_path("tests/golden/support_" + lower + ".txt"));
    const std::string got = analyze(name).support_table;
    if (got != want) return {false, "support table for " + name + " deviates from the golden"};
  }
  AnalysisReport rl = analyze("RL");
  if (rl.generator_partition.compatible != std::vector<std::string>{"Update"})
    return {false, "RL knowledge-compatible partition is not {Update}"};
  if (rl.total_loops != 1) return {false, "RL loop count " + std::to_string(rl.total_loops)};
  AnalysisReport crl = analyze("CRL");
  if (crl.total_loops != 2) return {false, "CRL loop count " + std::to_string(crl.total_loops)};
  return {true, "4 golden tables matched, RL loops=1, CRL loops=2"};
}

// --- C3: tabular admissibility on the slippery corridor ---------------------

QTable grid4_q_star() {
  const double v1 = 0.72 / 0.82;  // V*(s1) solves V1 = 0.72 + 0.18 V1
  QTable q(4, 2);
  q.at(0, 0) = 0.9 * v1;
  q.at(0, 1) = 0.9 * (0.9 * v1);
  q.at(1, 0) = v1;
  q.at(1, 1) = 0.9 * v1;
  q.at(2, 0) = 1.0;
  q.at(2, 1) = 0.9;
  return q;
}

Outcome c3_tabular_admissibility() {
  const auto t0 = std::chrono::steady_clock::now();

  QTable vi = value_iteration(grid4_env(), 1e-10, 100000);
  if (q_distance(vi, grid4_q_star()) >= 1e-8)
    return {false, "value iteration missed the closed form by " +
                       fmt(q_distance(vi, grid4_q_star()))};

  QTable loop_vi = value_iteration(chain2_loop_env(), 1e-10, 100000);
  for (int s = 0; s < loop_vi.n_states; ++s)
    if (std::abs(loop_vi.max_over_actions(s) - 10.0) > 1e-6)
      return {false, "chain2_loop V*(s" + std::to_string(s) +
                         ") = " + fmt(loop_vi.max_over_actions(s)) + ", expected 1/(1-0.9) = 10"};

  auto env = std::make_shared<EnvSpec>(grid4_env());
  const std::map<std::string, double> hp = {
      {"alpha", 0.1}, {"epsilon", 0.2}, {"steps", 200000}, {"seed", 1}};
  Agent agent = build_rl_agent(builtin("RL"), env, AgentMode::tabular, hp);
  Rng rng(1);
  Verdict v = admissibility_check(agent, rng);
  if (v.status != Verdict::Status::pass) {
    std::string why = "admissibility did not pass";
    for (const std::string& e : v.evidence)
      if (e.find(": fail") != std::string::npos) why += "; " + e;
    return {false, why};
  }
  if (!v.residuals.count("interface_residual") || v.residuals.at("interface_residual") != 0.0)
    return {false, "exact interface residual is not identically zero"};
  if (!v.residuals.count("bellman_distance") || v.residuals.at("bellman_distance") >= 0.05)
    return {false, "bellman_distance " + fmt(v.residuals.at("bellman_distance")) + " >= 0.05"};

  const double secs = elapsed_s(t0);
  if (secs >= 60.0) return {false, "time budget exceeded: " + fmt(secs) + "s >= 60s"};
  return {true, "interface_residual=" + fmt(v.residuals.at("interface_residual")) +
                    " bellman_distance=" + fmt(v.residuals.at("bellman_distance")) + " in " +
                    fmt(secs) + "s"};
}

// --- C4: the Bellman operator is a gamma-contraction -------------------------

Outcome c4_contraction() {
  EnvSpec env = grid4_env();
  Rng rng(777);
  double worst_slack = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    QTable q1(4, 2), q2(4, 2);
    for (double& x : q1.v) x = rng.uniform(-5.0, 5.0);
    for (double& x : q2.v) x = rng.uniform(-5.0, 5.0);
    const double lhs = q_distance(bellman_apply(env, q1), bellman_apply(env, q2));
    const double rhs = env.gamma * q_distance(q1, q2) + 1e-12;
    if (lhs > rhs)
      return {false, "contraction violated at trial " + std::to_string(trial) + ": " + fmt(lhs) +
                         " > " + fmt(rhs)};
    worst_slack = std::max(worst_slack, lhs - env.gamma * q_distance(q1, q2));
  }
  return {true, "1000 random pairs, worst slack " + fmt(worst_slack)};
}

// --- C5: network gradients against central finite differences ----------------

void nudge(MLPParams& p, int idx, double delta) {
  const int n_w1 = p.width * p.d;
  if (idx < n_w1)
    p.w1[idx] += delta;
  else if (idx < n_w1 + p.width)
    p.b1[idx - n_w1] += delta;
  else if (idx < n_w1 + 2 * p.width)
    p.w2[idx - n_w1 - p.width] += delta;
  else
    p.b2 += delta;
}

Outcome c5_gradients() {
  Rng rng(31337);
  const int n_states = 4, n_actions = 2;
  const int d = n_states + n_actions, width = 5;
  const double h = 1e-5, kink_margin = 1e-3, rel_tol = 1e-4;
  int tested = 0;
  for (int attempt = 0; attempt < 1000 && tested < 100; ++attempt) {
    MLPParams p = MLPParams::random(d, width, rng);
    std::vector<double> x =
        one_hot_encode(rng.below(n_states), rng.below(n_actions), n_states, n_actions);

    // skip draws near a ReLU kink, where the gradient is not defined
    bool near_kink = false;
    for (int j = 0; j < width; ++j) {
      double z = p.b1[j];
      for (int i = 0; i < d; ++i) z += p.w1[j * d + i] * x[i];
      near_kink = near_kink || std::abs(z) < kink_margin;
    }
    if (near_kink) continue;

    const std::vector<double> grad = mlp_q_gradient(p, x);
    for (int i = 0; i < p.param_count(); ++i) {
      MLPParams hi = p, lo = p;
      nudge(hi, i, h);
      nudge(lo, i, -h);
      const double fd = (mlp_q(hi, x) - mlp_q(lo, x)) / (2 * h);
      const double rel = std::abs(grad[i] - fd) / std::max({1.0, std::abs(fd), std::abs(grad[i])});
      if (rel > rel_tol)
        return {false, "gradient mismatch at param " + std::to_string(i) + ": analytic " +
                           fmt(grad[i]) + " vs fd " + fmt(fd)};
    }
    ++tested;
  }
  if (tested < 100) return {false, "only " + std::to_string(tested) + " clean draws out of 1000"};

  // a zero learning rate must leave the induced table exactly in place
  MLPParams p = MLPParams::random(d, width, rng);
  const Experience e{1, 0, 0.5, 2};
  const double frozen = compat_residual(p, e, 0.0, 0.9, n_states, n_actions);
  if (frozen != 0.0) return {false, "compat residual at alpha=0 is " + fmt(frozen) + ", not 0"};

  // the honest residual of an untrained network is reported, not asserted
  const double reported = compat_residual(p, e, 0.1, 0.9, n_states, n_actions);
  return {true, "100 clean draws within rel 1e-4; alpha=0 residual 0; random-net residual " +
                    fmt(reported) + " (reported only)"};
}

// --- C6: the Markov constraint separates honest from history-reading envs ----

const Constraint& rl_constraint(const std::string& id) {
  for (const Constraint& c : builtin("RL").constraints)
    if (c.id == id) return c;
  throw unknown_name("no RL constraint '" + id + "'");
}

Outcome c6_markov() {
  const Constraint& markov = rl_constraint("rho_Markov");

  Agent cheater =
      build_rl_agent_on_history(builtin("RL"), history_cheating_env(), {{"seed", 1}});
  Rng r1(5);
  Verdict bad = constraint_evaluate(cheater, markov, r1);
  if (bad.status != Verdict::Status::fail)
    return {false, "history-reading environment was not rejected"};
  bool has_witness = false;
  for (const std::string& e : bad.evidence)
    has_witness = has_witness || e.find("witness") != std::string::npos;
  if (!has_witness) return {false, "rejection carries no witness"};

  auto env = std::make_shared<EnvSpec>(chain2_env());
  Agent honest = build_rl_agent(builtin("RL"), env, AgentMode::tabular,
                                {{"alpha", 0.1}, {"epsilon", 0.2}, {"steps", 1000}, {"seed", 1}});
  Rng r2(5);
  Verdict good = constraint_evaluate(honest, markov, r2);
  if (good.status != Verdict::Status::pass)
    return {false, "honest kernel environment did not pass"};
  return {true, "cheating env rejected with witness, kernel env passes"};
}

// --- C7: the embedding ladder and behavior-preserving reindexing -------------

Outcome c7_ladder_and_reindex() {
  std::vector<LadderStep> steps = ladder();
  if (steps.size() != 6) return {false, "ladder has " + std::to_string(steps.size()) + " steps"};
  ArchMorphism composite;
  bool first = true;
  for (const LadderStep& step : steps) {
    Verdict v = morphism_validate(*step.morphism, *step.source, *step.target);
    if (!v.ok()) return {false, "step " + step.morphism->name + " failed validation"};
    composite = first ? *step.morphism : morphism_compose(*step.morphism, composite);
    first = false;
  }
  if (!morphism_validate(composite, builtin("RL"), builtin("SBL")).ok())
    return {false, "the composite RL -> SBL failed validation"};

  auto env = std::make_shared<EnvSpec>(grid4_env());
  const std::map<std::string, double> hp = {
      {"alpha", 0.1}, {"epsilon", 0.2}, {"steps", 1000}, {"seed", 1}};
  Agent direct = build_rl_agent(builtin("RL"), env, AgentMode::tabular, hp);
  Agent demo = build_crl_demo_agent(builtin("CRL"), env, hp);
  Agent pulled = reindex_agent(builtin_morphism("rl_to_crl"), builtin("RL"), demo);
  if (!agent_validate(pulled).ok()) return {false, "reindexed agent failed validation"};

  Rng ra(1), rb(1);
  const std::vector<TraceStep> ta = run_trace(direct, 400, ra);
  const std::vector<TraceStep> tb = run_trace(pulled, 400, rb);
  if (ta != tb) {
    for (std::size_t i = 0; i < ta.size(); ++i)
      if (!(ta[i] == tb[i]))
        return {false, "traces diverge at step " + std::to_string(i)};
    return {false, "traces differ in length"};
  }
  return {true, "6 steps + composite validate; 400-step traces bit-identical"};
}

// --- C8: the textual format round-trips and reports exact error positions ----

Outcome c8_dsl() {
  int archs = 0, morphs = 0;
  for (const auto& [path, text] : corpus_sources()) {
    const FileKind kind = sniff_kind(text, path);
    if (kind == FileKind::architecture) {
      Architecture a = parse_architecture(text, path);
      const std::string rendered = render_architecture(a);
      Architecture b = parse_architecture(rendered, path);
      const std::string mismatch = testutil::arch_mismatch(a, b);
      if (!mismatch.empty()) return {false, path + ": " + mismatch};
      if (render_architecture(b) != rendered) return {false, path + ": render not a fixed point"};
      ++archs;
    } else if (kind == FileKind::morphism) {
      MorphismFile f = parse_morphism_file(text, path);
      ArchMorphism m = resolve_morphism(f, builtin(f.source), builtin(f.target));
      MorphismFile f2 = parse_morphism_file(render_morphism(m), path);
      ArchMorphism m2 = resolve_morphism(f2, builtin(f.source), builtin(f.target));
      const std::string mismatch = testutil::morphism_mismatch(m, m2);
      if (!mismatch.empty()) return {false, path + ": " + mismatch};
      ++morphs;
    }
  }
  if (archs != 9 || morphs != 7)
    return {false, "corpus has " + std::to_string(archs) + " architectures and " +
                       std::to_string(morphs) + " morphisms, expected 9 + 7"};

  struct ErrCase {
    const char* text;
    int line, col;
  };
  const ErrCase cases[] = {
      {"architecture X {\n  syntax {\n    types { 7; }\n  }\n}\n", 3, 13},
      {"architecture X {\n  pattern = diagram {\n    wires { w : W; }\n    in = (w;\n  }\n}\n", 4,
       12},
  };
  for (const ErrCase& c : cases) {
    try {
      parse_architecture(c.text);
      return {false, "malformed input was accepted"};
    } catch (const SyntaxError& e) {
      if (e.line() != c.line || e.column() != c.col)
        return {false, "error reported at " + std::to_string(e.line()) + ":" +
                           std::to_string(e.column()) + ", expected " + std::to_string(c.line) +
                           ":" + std::to_string(c.col)};
    }
  }
  return {true, "16 corpus files round-trip; 2 fixtures report exact positions"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* label;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"C1 diagram-laws", c1_diagram_laws},
      {"C2 interface-census", c2_interface_census},
      {"C3 tabular-admissibility", c3_tabular_admissibility},
      {"C4 bellman-contraction", c4_contraction},
      {"C5 network-gradients", c5_gradients},
      {"C6 markov-separation", c6_markov},
      {"C7 ladder-reindex", c7_ladder_and_reindex},
      {"C8 dsl-roundtrip", c8_dsl},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << c.label
              << (o.detail.empty() ? "" : ": " + o.detail) << "\n";
  }
  return failed == 0 ? 0 : 1;
}
