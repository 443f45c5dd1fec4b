#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "agentarch/env.hpp"
#include "agentarch/rng.hpp"
#include "agentarch/semantics.hpp"
#include "agentarch/value.hpp"

namespace agentarch {

// Action-value table Q(s, a); entries stay finite.
struct QTable {
  int n_states = 0, n_actions = 0;
  std::vector<double> v;

  QTable() = default;
  QTable(int n_states, int n_actions)
      : n_states(n_states), n_actions(n_actions),
        v(static_cast<size_t>(n_states) * n_actions, 0.0) {}

  double& at(int s, int a) { return v[static_cast<size_t>(s) * n_actions + a]; }
  double at(int s, int a) const { return v[static_cast<size_t>(s) * n_actions + a]; }
  double max_over_actions(int s) const;

  bool operator==(const QTable&) const = default;
};

// Sup-norm distance between tables of equal shape.
double q_distance(const QTable& a, const QTable& b);

Tensor q_to_tensor(const QTable& q);
QTable q_from_tensor(const Tensor& t);

struct Experience {
  int s = 0, a = 0;
  double r = 0.0;
  int s_next = 0;
};

// Argmax action; ties break to the lowest action index.
int greedy_policy(const QTable& q, int s);

// One tabular update Q(s,a) += alpha * (r + gamma * max_u Q(s',u) - Q(s,a));
// every other entry is untouched. Throws HyperparamOutOfRange unless
// 0 <= alpha <= 1 and 0 <= gamma < 1.
QTable td_update(const QTable& q, const Experience& e, double alpha, double gamma);

// Exact one-step lookahead expectation over the kernel rows.
QTable bellman_apply(const EnvSpec& env, const QTable& q);

// Iterates bellman_apply from Q = 0 until the sup-norm change drops below
// tol. Throws MaxIterExceeded past max_iter sweeps.
QTable value_iteration(const EnvSpec& env, double tol, int max_iter);

// Epsilon-greedy behavior over greedy_policy with episode resets on
// absorbing states; gamma comes from the environment.
QTable run_q_learning(const EnvSpec& env, long long steps, double alpha, double epsilon, Rng& rng);

// Three-layer ReLU network computing a scalar action value from a feature
// vector: h = relu(W1 x + b1), q = W2 h + b2.
struct MLPParams {
  int d = 0, width = 0;           // input dim, hidden width
  std::vector<double> w1;         // width x d, row-major
  std::vector<double> b1;         // width
  std::vector<double> w2;         // width
  double b2 = 0.0;

  static MLPParams random(int d, int width, Rng& rng, double scale = 0.5);
  int param_count() const { return width * d + width + width + 1; }
};

// One-hot encoding of (s, a) into R^(|S|+|A|).
std::vector<double> one_hot_encode(int s, int a, int n_states, int n_actions);

double mlp_q(const MLPParams& p, const std::vector<double>& x);

// Gradient of q = mlp_q(p, x) with respect to every parameter, packed in
// (w1, b1, w2, b2) order.
std::vector<double> mlp_q_gradient(const MLPParams& p, const std::vector<double>& x);

// Semi-gradient TD step on the squared error to the frozen target
// y = r + gamma * max_u Q(s', u).
MLPParams mlp_td_step(const MLPParams& p, const Experience& e, double alpha, double gamma,
                      int n_states, int n_actions);

// Tabulates Q over all (s, a) pairs.
QTable mlp_tabulate(const MLPParams& p, int n_states, int n_actions);

// Sup-norm gap between "step the network, then tabulate" and "tabulate, then
// apply the tabular rule" for one experience. Zero precisely when the network
// step acts on the induced table like td_update.
double compat_residual(const MLPParams& p, const Experience& e, double alpha, double gamma,
                       int n_states, int n_actions);

enum class AgentMode { tabular, neural };

// Assembles the RL agent over a finite environment: I interprets S/A as the
// environment's sets, EnvInteraction as its kernel, the parameter carrier as
// a Q-table (tabular; R = identity) or MLP weights (neural; R tabulates).
// Hyperparameters: alpha, gamma, epsilon, steps, seed, tol, width.
Agent build_rl_agent(const Architecture& arch, std::shared_ptr<const EnvSpec> env, AgentMode mode,
                     const std::map<std::string, double>& hp);

// Same loop shape, but against a history-reading environment (only the
// Markov constraint is meaningfully evaluable there).
Agent build_rl_agent_on_history(const Architecture& arch, std::shared_ptr<const HistoryEnv> env,
                                const std::map<std::string, double>& hp);

// Tabular demo agent for the causal architecture: the policy reads only
// (s, theta_pi), the causal carrier accumulates (s, a) visit counts, Do is
// the identity intervention. Reindexing it along RL -> CRL must reproduce
// the plain RL agent's behavior.
Agent build_crl_demo_agent(const Architecture& arch, std::shared_ptr<const EnvSpec> env,
                           const std::map<std::string, double>& hp);

// Fixture environments.
EnvSpec grid4_env();        // 4-state chain, slip 0.2 at the middle, gamma 0.9
EnvSpec chain2_env();       // deterministic 2-chain, absorbing goal
EnvSpec chain2_loop_env();  // goal self-loops with reward 1: V*(goal) = 10
std::shared_ptr<HistoryEnv> history_cheating_env();  // kernel reads the previous action

}  // namespace agentarch
