#include <cmath>
#include <memory>

#include "doctest.h"

#include "agentarch/dsl.hpp"
#include "agentarch/errors.hpp"
#include "agentarch/rl.hpp"
#include "equiv.hpp"
#include "helpers.hpp"

using namespace agentarch;

namespace {

// Closed-form optimal action values for the slippery corridor. With
// gamma = 0.9 and slip 0.2 at s1, V*(s1) solves V1 = 0.72 + 0.18 V1.
QTable grid4_q_star() {
  const double v1 = 0.72 / 0.82;
  QTable q(4, 2);
  q.at(0, 0) = 0.9 * v1;              // right
  q.at(0, 1) = 0.9 * (0.9 * v1);      // left keeps you at s0
  q.at(1, 0) = v1;                    // right (slippery)
  q.at(1, 1) = 0.9 * v1;              // left keeps you at s1
  q.at(2, 0) = 1.0;                   // right enters the absorbing goal
  q.at(2, 1) = 0.9;                   // left keeps you at s2
  q.at(3, 0) = 0.0;
  q.at(3, 1) = 0.0;
  return q;
}

QTable random_table(int ns, int na, Rng& rng) {
  QTable q(ns, na);
  for (double& x : q.v) x = rng.uniform(-5.0, 5.0);
  return q;
}

}  // namespace

TEST_CASE("q-table basics") {
  QTable q(2, 3);
  q.at(1, 2) = 4.0;
  q.at(1, 0) = -1.0;
  CHECK(q.at(1, 2) == 4.0);
  CHECK(q.max_over_actions(1) == 4.0);
  CHECK(q.max_over_actions(0) == 0.0);

  QTable p = q;
  p.at(0, 0) = 0.5;
  CHECK(q_distance(p, q) == 0.5);

  Tensor t = q_to_tensor(q);
  CHECK(t.shape == std::vector<int>{2, 3});
  CHECK(q_from_tensor(t) == q);
}

TEST_CASE("greedy policy breaks ties toward the lowest action index") {
  QTable q(1, 3);
  CHECK(greedy_policy(q, 0) == 0);  // all zero
  q.at(0, 1) = 2.0;
  q.at(0, 2) = 2.0;
  CHECK(greedy_policy(q, 0) == 1);
}

TEST_CASE("td_update changes exactly one entry by the TD rule") {
  QTable q(2, 2);
  q.at(1, 0) = 1.0;
  q.at(1, 1) = 3.0;
  QTable next = td_update(q, Experience{0, 1, 1.0, 1}, 0.5, 0.9);
  // target = 1 + 0.9 * max(1, 3) = 3.7; Q(0,1) += 0.5 * (3.7 - 0)
  CHECK(next.at(0, 1) == doctest::Approx(1.85));
  CHECK(next.at(0, 0) == 0.0);
  CHECK(next.at(1, 0) == 1.0);
  CHECK(next.at(1, 1) == 3.0);

  CHECK_THROWS_AS(td_update(q, Experience{0, 0, 0.0, 0}, 1.5, 0.9), Error);
  CHECK_THROWS_AS(td_update(q, Experience{0, 0, 0.0, 0}, 0.1, 1.0), Error);
}

TEST_CASE("bellman_apply performs a one-step lookahead expectation") {
  EnvSpec env = chain2_env();
  QTable zero(2, 2);
  QTable b1 = bellman_apply(env, zero);
  CHECK(b1.at(0, 0) == doctest::Approx(1.0));  // go pays 1
  CHECK(b1.at(0, 1) == doctest::Approx(0.0));
  CHECK(b1.at(1, 0) == doctest::Approx(0.0));  // absorbing goal pays nothing

  // the slippery transition mixes the two successor values
  EnvSpec grid = grid4_env();
  QTable q(4, 2);
  q.at(2, 0) = 1.0;
  q.at(1, 0) = 0.5;
  QTable b = bellman_apply(grid, q);
  CHECK(b.at(1, 0) == doctest::Approx(0.8 * (0.9 * 1.0) + 0.2 * (0.9 * 0.5)));
}

TEST_CASE("value iteration reaches the closed-form fixed points") {
  QTable grid_q = value_iteration(grid4_env(), 1e-10, 100000);
  CHECK(q_distance(grid_q, grid4_q_star()) < 1e-8);

  QTable chain_q = value_iteration(chain2_env(), 1e-10, 100000);
  CHECK(chain_q.at(0, 0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(chain_q.at(0, 1) == doctest::Approx(0.9).epsilon(1e-8));
  CHECK(chain_q.at(1, 0) == doctest::Approx(0.0));

  CHECK_THROWS_AS(value_iteration(grid4_env(), 1e-12, 3), Error);
}

TEST_CASE("the Bellman operator is a gamma-contraction on random tables") {
  EnvSpec env = grid4_env();
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    QTable q1 = random_table(4, 2, rng);
    QTable q2 = random_table(4, 2, rng);
    double lhs = q_distance(bellman_apply(env, q1), bellman_apply(env, q2));
    CAPTURE(trial);
    CHECK(lhs <= env.gamma * q_distance(q1, q2) + 1e-12);
  }
}

TEST_CASE("q-learning converges on the short chain") {
  Rng rng(1);
  QTable q = run_q_learning(chain2_env(), 20000, 0.1, 0.2, rng);
  QTable q_star(2, 2);
  q_star.at(0, 0) = 1.0;
  q_star.at(0, 1) = 0.9;
  CHECK(q_distance(q, q_star) < 0.05);
}

TEST_CASE("one-hot features concatenate state and action blocks") {
  std::vector<double> x = one_hot_encode(2, 1, 4, 2);
  REQUIRE(x.size() == 6);
  CHECK(x == std::vector<double>{0, 0, 1, 0, 0, 1});
}

TEST_CASE("mlp_q computes the two-layer ReLU value") {
  MLPParams p;
  p.d = 2;
  p.width = 2;
  p.w1 = {1.0, 0.0, -1.0, 1.0};  // rows: (1,0) and (-1,1)
  p.b1 = {0.0, 0.5};
  p.w2 = {2.0, 3.0};
  p.b2 = 0.25;
  // x = (1, 2): z = (1, 1.5), h = (1, 1.5), q = 2 + 4.5 + 0.25
  CHECK(mlp_q(p, {1.0, 2.0}) == doctest::Approx(6.75));
  // x = (2, 0): z = (2, -1.5), h = (2, 0), q = 4 + 0 + 0.25
  CHECK(mlp_q(p, {2.0, 0.0}) == doctest::Approx(4.25));
}

TEST_CASE("the analytic gradient matches central finite differences off the kinks") {
  Rng rng(31);
  const double h = 1e-5;
  int tested = 0;
  for (int attempt = 0; attempt < 200 && tested < 20; ++attempt) {
    MLPParams p = MLPParams::random(6, 5, rng);
    std::vector<double> x(6);
    for (double& xi : x) xi = rng.uniform(-1.0, 1.0);

    // skip draws with a hidden unit near its ReLU kink
    bool near_kink = false;
    for (int j = 0; j < p.width; ++j) {
      double z = p.b1[static_cast<std::size_t>(j)];
      for (int i = 0; i < p.d; ++i)
        z += p.w1[static_cast<std::size_t>(j * p.d + i)] * x[static_cast<std::size_t>(i)];
      if (std::abs(z) < 1e-3) near_kink = true;
    }
    if (near_kink) continue;
    ++tested;

    std::vector<double> grad = mlp_q_gradient(p, x);
    REQUIRE(static_cast<int>(grad.size()) == p.param_count());

    auto nudge = [&](int flat, double eps) {
      MLPParams q = p;
      int nw1 = p.width * p.d;
      if (flat < nw1)
        q.w1[static_cast<std::size_t>(flat)] += eps;
      else if (flat < nw1 + p.width)
        q.b1[static_cast<std::size_t>(flat - nw1)] += eps;
      else if (flat < nw1 + 2 * p.width)
        q.w2[static_cast<std::size_t>(flat - nw1 - p.width)] += eps;
      else
        q.b2 += eps;
      return q;
    };
    for (int i = 0; i < p.param_count(); ++i) {
      double fd = (mlp_q(nudge(i, h), x) - mlp_q(nudge(i, -h), x)) / (2 * h);
      double rel = std::abs(grad[static_cast<std::size_t>(i)] - fd) /
                   std::max({1.0, std::abs(fd), std::abs(grad[static_cast<std::size_t>(i)])});
      CAPTURE(i);
      CHECK(rel <= 1e-4);
    }
  }
  CHECK(tested >= 10);
}

TEST_CASE("a zero-rate network step acts exactly like the tabular rule") {
  Rng rng(7);
  MLPParams p = MLPParams::random(6, 8, rng);
  double residual = compat_residual(p, Experience{1, 0, 1.0, 2}, 0.0, 0.9, 4, 2);
  CHECK(residual == 0.0);
}

TEST_CASE("a random network's update residual is finite and reported") {
  Rng rng(8);
  MLPParams p = MLPParams::random(6, 8, rng);
  double residual = compat_residual(p, Experience{0, 1, 0.5, 1}, 0.1, 0.9, 4, 2);
  CHECK(residual >= 0.0);
  CHECK(std::isfinite(residual));
  MESSAGE("random-network update residual = ", residual);
}

TEST_CASE("tabulation evaluates the network on every state-action pair") {
  Rng rng(9);
  MLPParams p = MLPParams::random(6, 4, rng);
  QTable q = mlp_tabulate(p, 4, 2);
  for (int s = 0; s < 4; ++s)
    for (int a = 0; a < 2; ++a)
      CHECK(q.at(s, a) == doctest::Approx(mlp_q(p, one_hot_encode(s, a, 4, 2))));
}

TEST_CASE("fixture environments match their on-disk descriptions") {
  auto check_env = [](const EnvSpec& fixture, const std::string& rel) {
    EnvSpec parsed = parse_env(testutil::read_file(testutil::src_path(rel)), rel);
    std::string mismatch = testutil::env_mismatch(fixture, parsed);
    CAPTURE(rel);
    CAPTURE(mismatch);
    CHECK(mismatch.empty());
    CHECK(parsed.validate().ok());
  };
  check_env(grid4_env(), "envs/grid4.env");
  check_env(chain2_env(), "envs/chain2.env");
  check_env(chain2_loop_env(), "envs/chain2_loop.env");
}

TEST_CASE("environment validation catches bad kernels") {
  EnvSpec env = chain2_env();
  env.kernel[{0, 0}][0].p = 0.5;  // row no longer sums to 1
  CHECK_FALSE(env.validate().ok());
}

TEST_CASE("the history-cheating environment depends on its history") {
  auto env = history_cheating_env();
  CHECK(env->n_states() >= 2);
  CHECK(env->probe_window >= 1);
  // same (s, a) query, different histories, different rows
  std::vector<std::pair<int, int>> h1 = {{0, 0}};
  std::vector<std::pair<int, int>> h2 = {{0, 1}};
  CHECK(env->kernel(h1, 0, 0) != env->kernel(h2, 0, 0));
}
