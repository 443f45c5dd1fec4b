#include "agentarch/rl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "agentarch/errors.hpp"

namespace agentarch {

double QTable::max_over_actions(int s) const {
  double best = at(s, 0);
  for (int a = 1; a < n_actions; ++a) best = std::max(best, at(s, a));
  return best;
}

double q_distance(const QTable& a, const QTable& b) {
  if (a.n_states != b.n_states || a.n_actions != b.n_actions)
    throw shape_mismatch("q_distance over mismatched tables");
  double m = 0.0;
  for (size_t i = 0; i < a.v.size(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
  return m;
}

Tensor q_to_tensor(const QTable& q) {
  Tensor t = Tensor::zeros({q.n_states, q.n_actions});
  t.data = q.v;
  return t;
}

QTable q_from_tensor(const Tensor& t) {
  if (t.shape.size() != 2) throw shape_mismatch("q_from_tensor expects a rank-2 tensor");
  QTable q(t.shape[0], t.shape[1]);
  q.v = t.data;
  return q;
}

int greedy_policy(const QTable& q, int s) {
  int best = 0;
  for (int a = 1; a < q.n_actions; ++a)
    if (q.at(s, a) > q.at(s, best)) best = a;
  return best;
}

QTable td_update(const QTable& q, const Experience& e, double alpha, double gamma) {
  if (alpha < 0.0 || alpha > 1.0) throw hyperparam_out_of_range("alpha must lie in [0, 1]");
  if (gamma < 0.0 || gamma >= 1.0) throw hyperparam_out_of_range("gamma must lie in [0, 1)");
  QTable out = q;
  double target = e.r + gamma * q.max_over_actions(e.s_next);
  out.at(e.s, e.a) += alpha * (target - q.at(e.s, e.a));
  return out;
}

QTable bellman_apply(const EnvSpec& env, const QTable& q) {
  QTable out(env.n_states(), env.n_actions());
  for (int s = 0; s < env.n_states(); ++s)
    for (int a = 0; a < env.n_actions(); ++a) {
      double acc = 0.0;
      for (const EnvRow& row : env.rows(s, a))
        acc += row.p * (row.r + env.gamma * q.max_over_actions(row.s_next));
      out.at(s, a) = acc;
    }
  return out;
}

QTable value_iteration(const EnvSpec& env, double tol, int max_iter) {
  if (tol <= 0.0) throw hyperparam_out_of_range("value iteration tolerance must be positive");
  QTable q(env.n_states(), env.n_actions());
  for (int it = 0; it < max_iter; ++it) {
    QTable next = bellman_apply(env, q);
    double delta = q_distance(next, q);
    q = std::move(next);
    if (delta < tol) return q;
  }
  throw max_iter_exceeded("value iteration did not converge in " + std::to_string(max_iter) +
                          " sweeps");
}

QTable run_q_learning(const EnvSpec& env, long long steps, double alpha, double epsilon,
                      Rng& rng) {
  if (alpha <= 0.0 || alpha > 1.0) throw hyperparam_out_of_range("alpha must lie in (0, 1]");
  if (epsilon < 0.0 || epsilon > 1.0) throw hyperparam_out_of_range("epsilon must lie in [0, 1]");
  QTable q(env.n_states(), env.n_actions());
  int s = env.start_state;
  for (long long n = 0; n < steps; ++n) {
    int a = rng.uniform() < epsilon ? static_cast<int>(rng.below(env.n_actions()))
                                    : greedy_policy(q, s);
    EnvRow row = env.sample(s, a, rng);
    q = td_update(q, Experience{s, a, row.r, row.s_next}, alpha, env.gamma);
    s = env.absorbing(row.s_next) ? env.start_state : row.s_next;
  }
  return q;
}

// ---------------------------------------------------------------------------
// Neural carrier.

MLPParams MLPParams::random(int d, int width, Rng& rng, double scale) {
  MLPParams p;
  p.d = d;
  p.width = width;
  p.w1.resize(static_cast<size_t>(width) * d);
  p.b1.resize(width);
  p.w2.resize(width);
  for (double& x : p.w1) x = rng.uniform(-scale, scale);
  for (double& x : p.b1) x = rng.uniform(-scale, scale);
  for (double& x : p.w2) x = rng.uniform(-scale, scale);
  p.b2 = rng.uniform(-scale, scale);
  return p;
}

std::vector<double> one_hot_encode(int s, int a, int n_states, int n_actions) {
  std::vector<double> x(static_cast<size_t>(n_states) + n_actions, 0.0);
  x[static_cast<size_t>(s)] = 1.0;
  x[static_cast<size_t>(n_states) + a] = 1.0;
  return x;
}

double mlp_q(const MLPParams& p, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != p.d) throw shape_mismatch("mlp_q input dimension mismatch");
  double q = p.b2;
  for (int i = 0; i < p.width; ++i) {
    double z = p.b1[i];
    for (int j = 0; j < p.d; ++j) z += p.w1[static_cast<size_t>(i) * p.d + j] * x[j];
    if (z > 0.0) q += p.w2[i] * z;
  }
  return q;
}

std::vector<double> mlp_q_gradient(const MLPParams& p, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != p.d)
    throw shape_mismatch("mlp_q_gradient input dimension mismatch");
  std::vector<double> g(p.param_count(), 0.0);
  double* gw1 = g.data();
  double* gb1 = gw1 + static_cast<size_t>(p.width) * p.d;
  double* gw2 = gb1 + p.width;
  double* gb2 = gw2 + p.width;
  for (int i = 0; i < p.width; ++i) {
    double z = p.b1[i];
    for (int j = 0; j < p.d; ++j) z += p.w1[static_cast<size_t>(i) * p.d + j] * x[j];
    if (z > 0.0) {
      gw2[i] = z;
      gb1[i] = p.w2[i];
      for (int j = 0; j < p.d; ++j) gw1[static_cast<size_t>(i) * p.d + j] = p.w2[i] * x[j];
    }
  }
  *gb2 = 1.0;
  return g;
}

MLPParams mlp_td_step(const MLPParams& p, const Experience& e, double alpha, double gamma,
                      int n_states, int n_actions) {
  if (alpha < 0.0 || alpha > 1.0) throw hyperparam_out_of_range("alpha must lie in [0, 1]");
  if (gamma < 0.0 || gamma >= 1.0) throw hyperparam_out_of_range("gamma must lie in [0, 1)");
  std::vector<double> x = one_hot_encode(e.s, e.a, n_states, n_actions);
  double q_sa = mlp_q(p, x);
  double best_next = -std::numeric_limits<double>::infinity();
  for (int u = 0; u < n_actions; ++u)
    best_next = std::max(best_next, mlp_q(p, one_hot_encode(e.s_next, u, n_states, n_actions)));
  double y = e.r + gamma * best_next;  // frozen target: semi-gradient
  double dl_dq = 2.0 * (q_sa - y);
  std::vector<double> g = mlp_q_gradient(p, x);

  MLPParams out = p;
  size_t k = 0;
  for (double& w : out.w1) w -= alpha * dl_dq * g[k++];
  for (double& b : out.b1) b -= alpha * dl_dq * g[k++];
  for (double& w : out.w2) w -= alpha * dl_dq * g[k++];
  out.b2 -= alpha * dl_dq * g[k++];
  return out;
}

QTable mlp_tabulate(const MLPParams& p, int n_states, int n_actions) {
  QTable q(n_states, n_actions);
  for (int s = 0; s < n_states; ++s)
    for (int a = 0; a < n_actions; ++a) q.at(s, a) = mlp_q(p, one_hot_encode(s, a, n_states, n_actions));
  return q;
}

double compat_residual(const MLPParams& p, const Experience& e, double alpha, double gamma,
                       int n_states, int n_actions) {
  QTable stepped = mlp_tabulate(mlp_td_step(p, e, alpha, gamma, n_states, n_actions), n_states,
                                n_actions);
  QTable updated = td_update(mlp_tabulate(p, n_states, n_actions), e, alpha, gamma);
  return q_distance(stepped, updated);
}

// ---------------------------------------------------------------------------
// Agent assembly.

namespace {

SemObject experience_object(const SemObject& s_obj, const SemObject& a_obj) {
  return SemObject::product({s_obj, a_obj, SemObject::real_space({1}), s_obj});
}

// Shared tabular pieces so I(Update) and J(Upd) are literally the same code.
std::function<Tuple(const Tuple&)> td_body(double alpha, double gamma) {
  return [alpha, gamma](const Tuple& in) -> Tuple {
    QTable q = q_from_tensor(in[0].tensor());
    const Tuple& e = in[1].tuple();
    Experience ex{static_cast<int>(e[0].index()), static_cast<int>(e[1].index()), e[2].real(),
                  static_cast<int>(e[3].index())};
    return Tuple{Value{q_to_tensor(td_update(q, ex, alpha, gamma))}};
  };
}

std::function<Tuple(const Tuple&)> greedy_body() {
  return [](const Tuple& in) -> Tuple {
    QTable q = q_from_tensor(in.back().tensor());
    return Tuple{Value{greedy_policy(q, static_cast<int>(in[0].index()))}};
  };
}

SemMorphism env_sampler(const std::shared_ptr<const EnvSpec>& env, const SemObject& s_obj,
                        const SemObject& a_obj) {
  SemObject e_obj = experience_object(s_obj, a_obj);
  auto envp = env;
  return SemMorphism::from_sampler(
      {s_obj, a_obj}, {e_obj}, [envp](const Tuple& in, Rng& rng) -> Tuple {
        int s = static_cast<int>(in[0].index());
        int a = static_cast<int>(in[1].index());
        EnvRow row = envp->sample(s, a, rng);
        return Tuple{Value{Tuple{Value{s}, Value{a}, Value{row.r}, Value{row.s_next}}}};
      });
}

Value tabulate_params(const Value& theta, int ns, int na, int d, int width) {
  const Tuple& t = theta.tuple();
  MLPParams p;
  p.d = d;
  p.width = width;
  p.w1 = t[0].tensor().data;
  p.b1 = t[1].tensor().data;
  p.w2 = t[2].tensor().data;
  p.b2 = t[3].tensor().data[0];
  return Value{q_to_tensor(mlp_tabulate(p, ns, na))};
}

}  // namespace

Agent build_rl_agent(const Architecture& arch, std::shared_ptr<const EnvSpec> env, AgentMode mode,
                     const std::map<std::string, double>& hp) {
  Agent agent;
  agent.name = mode == AgentMode::tabular ? "rl-tabular" : "rl-neural";
  agent.arch = std::make_shared<Architecture>(arch);
  agent.env = env;
  agent.hyperparams = hp;
  if (!agent.hyperparams.count("gamma")) agent.hyperparams["gamma"] = env->gamma;
  agent.hyperparams["neural"] = mode == AgentMode::neural ? 1.0 : 0.0;

  const int ns = env->n_states(), na = env->n_actions();
  const double alpha = agent.hp("alpha", 0.1);
  const double gamma = agent.hp("gamma", env->gamma);
  SemObject s_obj = SemObject::finite(env->states);
  SemObject a_obj = SemObject::finite(env->actions);
  SemObject e_obj = experience_object(s_obj, a_obj);
  SemObject table = SemObject::real_space({ns, na});

  agent.J.types = {{"Theta_k", table}, {"E_k", e_obj}};
  agent.J.additive = {"Theta_k"};
  auto td = td_body(alpha, gamma);
  agent.J.gens["Upd"] = SemMorphism::deterministic({table, e_obj}, {table}, td);

  agent.I.types = {{"S", s_obj}, {"A", a_obj}, {"E", e_obj}};
  agent.I.gens["EnvInteraction"] = env_sampler(env, s_obj, a_obj);
  agent.carriers[{"E", "E_k"}] = [](const Value& v) { return v; };

  if (mode == AgentMode::tabular) {
    agent.I.types["Theta_s"] = table;
    agent.I.additive = {"Theta_s"};
    agent.I.gens["Policy"] = SemMorphism::deterministic({s_obj, table}, {a_obj}, greedy_body());
    agent.I.gens["Update"] = SemMorphism::deterministic({table, e_obj}, {table}, td);
    agent.carriers[{"Theta_s", "Theta_k"}] = [](const Value& v) { return v; };
  } else {
    const int width = static_cast<int>(agent.hp("width", 32));
    const int d = ns + na;
    SemObject params = SemObject::product(
        {SemObject::real_space({width, d}), SemObject::real_space({width}),
         SemObject::real_space({width}), SemObject::real_space({1})});
    agent.I.types["Theta_s"] = params;
    agent.I.gens["Policy"] = SemMorphism::deterministic(
        {s_obj, params}, {a_obj}, [ns, na, d, width](const Tuple& in) -> Tuple {
          QTable q = q_from_tensor(tabulate_params(in[1], ns, na, d, width).tensor());
          return Tuple{Value{greedy_policy(q, static_cast<int>(in[0].index()))}};
        });
    agent.I.gens["Update"] = SemMorphism::deterministic(
        {params, e_obj}, {params},
        [alpha, gamma, ns, na, d, width](const Tuple& in) -> Tuple {
          const Tuple& t = in[0].tuple();
          MLPParams p;
          p.d = d;
          p.width = width;
          p.w1 = t[0].tensor().data;
          p.b1 = t[1].tensor().data;
          p.w2 = t[2].tensor().data;
          p.b2 = t[3].tensor().data[0];
          const Tuple& e = in[1].tuple();
          Experience ex{static_cast<int>(e[0].index()), static_cast<int>(e[1].index()),
                        e[2].real(), static_cast<int>(e[3].index())};
          MLPParams q = mlp_td_step(p, ex, alpha, gamma, ns, na);
          Tensor w1 = Tensor::zeros({width, d});
          w1.data = q.w1;
          Tensor b1 = Tensor::zeros({width});
          b1.data = q.b1;
          Tensor w2 = Tensor::zeros({width});
          w2.data = q.w2;
          Tensor b2 = Tensor::zeros({1});
          b2.data[0] = q.b2;
          return Tuple{Value{Tuple{Value{w1}, Value{b1}, Value{w2}, Value{b2}}}};
        });
    agent.carriers[{"Theta_s", "Theta_k"}] = [ns, na, d, width](const Value& v) {
      return tabulate_params(v, ns, na, d, width);
    };
  }
  return agent;
}

Agent build_rl_agent_on_history(const Architecture& arch, std::shared_ptr<const HistoryEnv> env,
                                const std::map<std::string, double>& hp) {
  // The agent declares the empty-history kernel as its interaction model; the
  // attached history environment is what the Markov probe interrogates.
  auto spec = std::make_shared<EnvSpec>();
  spec->name = env->name + "-declared";
  spec->states = env->states;
  spec->actions = env->actions;
  spec->gamma = env->gamma;
  for (int s = 0; s < env->n_states(); ++s)
    for (int a = 0; a < env->n_actions(); ++a) spec->kernel[{s, a}] = env->kernel({}, s, a);
  Agent agent = build_rl_agent(arch, spec, AgentMode::tabular, hp);
  agent.name = "rl-tabular-history";
  agent.env.reset();
  agent.history_env = env;
  return agent;
}

Agent build_crl_demo_agent(const Architecture& arch, std::shared_ptr<const EnvSpec> env,
                           const std::map<std::string, double>& hp) {
  Agent agent;
  agent.name = "crl-demo";
  agent.arch = std::make_shared<Architecture>(arch);
  agent.env = env;
  agent.hyperparams = hp;
  if (!agent.hyperparams.count("gamma")) agent.hyperparams["gamma"] = env->gamma;

  const int ns = env->n_states(), na = env->n_actions();
  const double alpha = agent.hp("alpha", 0.1);
  const double gamma = agent.hp("gamma", env->gamma);
  SemObject s_obj = SemObject::finite(env->states);
  SemObject a_obj = SemObject::finite(env->actions);
  SemObject e_obj = experience_object(s_obj, a_obj);
  SemObject table = SemObject::real_space({ns, na});

  // The policy carrier is a Q-table; the causal carrier counts (s, a) visits.
  auto count_body = [](const Tuple& in) -> Tuple {
    Tensor counts = in[0].tensor();
    const Tuple& e = in[1].tuple();
    counts.at({static_cast<int>(e[0].index()), static_cast<int>(e[1].index())}) += 1.0;
    return Tuple{Value{counts}};
  };
  auto intervene_body = [](const Tuple& in) -> Tuple { return Tuple{in[0]}; };
  auto td = td_body(alpha, gamma);

  agent.I.types = {{"S", s_obj},           {"A", a_obj},           {"E", e_obj},
                   {"Theta_pi_s", table},  {"Theta_CS_s", table}};
  agent.I.additive = {"Theta_pi_s", "Theta_CS_s"};
  agent.I.gens["Policy"] = SemMorphism::deterministic(
      {s_obj, table, table}, {a_obj}, [](const Tuple& in) -> Tuple {
        QTable q = q_from_tensor(in[1].tensor());  // causal input in[2] unused
        return Tuple{Value{greedy_policy(q, static_cast<int>(in[0].index()))}};
      });
  agent.I.gens["EnvInteraction"] = env_sampler(env, s_obj, a_obj);
  agent.I.gens["Do"] = SemMorphism::deterministic({table, a_obj}, {table}, intervene_body);
  agent.I.gens["PolicyUpdate"] = SemMorphism::deterministic(
      {table, table, e_obj}, {table}, [td](const Tuple& in) -> Tuple {
        return td(Tuple{in[0], in[2]});  // causal carrier in[1] unused
      });
  agent.I.gens["CausalUpdate"] = SemMorphism::deterministic({table, e_obj}, {table}, count_body);

  agent.J.types = {{"Theta_pi_k", table}, {"Theta_CS_k", table}, {"E_k", e_obj}};
  agent.J.additive = {"Theta_pi_k", "Theta_CS_k"};
  agent.J.gens["PolicyUpd"] = SemMorphism::deterministic(
      {table, table, e_obj}, {table}, [td](const Tuple& in) -> Tuple {
        return td(Tuple{in[1], in[2]});  // dom order (CS, pi, E)
      });
  agent.J.gens["CausalUpd"] = SemMorphism::deterministic({table, e_obj}, {table}, count_body);
  agent.J.gens["CausalIntervention"] =
      SemMorphism::deterministic({table}, {table}, [](const Tuple& in) { return Tuple{in[0]}; });

  agent.carriers[{"Theta_pi_s", "Theta_pi_k"}] = [](const Value& v) { return v; };
  agent.carriers[{"Theta_CS_s", "Theta_CS_k"}] = [](const Value& v) { return v; };
  agent.carriers[{"E", "E_k"}] = [](const Value& v) { return v; };
  return agent;
}

// ---------------------------------------------------------------------------
// Fixture environments.

EnvSpec grid4_env() {
  EnvSpec env;
  env.name = "grid4";
  env.states = {"s0", "s1", "s2", "s3"};
  env.actions = {"advance", "stay"};
  env.gamma = 0.9;
  env.kernel[{0, 0}] = {{0.0, 1, 1.0}};
  env.kernel[{0, 1}] = {{0.0, 0, 1.0}};
  env.kernel[{1, 0}] = {{0.0, 2, 0.8}, {0.0, 1, 0.2}};  // slip
  env.kernel[{1, 1}] = {{0.0, 1, 1.0}};
  env.kernel[{2, 0}] = {{1.0, 3, 1.0}};  // reward on entering the goal
  env.kernel[{2, 1}] = {{0.0, 2, 1.0}};
  env.kernel[{3, 0}] = {{0.0, 3, 1.0}};
  env.kernel[{3, 1}] = {{0.0, 3, 1.0}};
  return env;
}

EnvSpec chain2_env() {
  EnvSpec env;
  env.name = "chain2";
  env.states = {"s0", "goal"};
  env.actions = {"advance", "stay"};
  env.gamma = 0.9;
  env.kernel[{0, 0}] = {{1.0, 1, 1.0}};
  env.kernel[{0, 1}] = {{0.0, 0, 1.0}};
  env.kernel[{1, 0}] = {{0.0, 1, 1.0}};
  env.kernel[{1, 1}] = {{0.0, 1, 1.0}};
  return env;
}

EnvSpec chain2_loop_env() {
  EnvSpec env = chain2_env();
  env.name = "chain2_loop";
  env.kernel[{1, 0}] = {{1.0, 1, 1.0}};  // rewarding self-loop: V*(goal) = 1/(1-gamma)
  env.kernel[{1, 1}] = {{1.0, 1, 1.0}};
  return env;
}

std::shared_ptr<HistoryEnv> history_cheating_env() {
  auto env = std::make_shared<HistoryEnv>();
  env->name = "history-cheat";
  env->states = {"s0", "s1"};
  env->actions = {"a0", "a1"};
  env->gamma = 0.9;
  env->probe_window = 2;
  env->kernel = [](const std::vector<std::pair<int, int>>& h, int, int) -> std::vector<EnvRow> {
    bool used_a1 = std::any_of(h.begin(), h.end(),
                               [](const std::pair<int, int>& sa) { return sa.second == 1; });
    double p1 = used_a1 ? 0.9 : 0.1;  // the kernel secretly reads past actions
    return {{1.0, 1, p1}, {0.0, 0, 1.0 - p1}};
  };
  return env;
}

}  // namespace agentarch
