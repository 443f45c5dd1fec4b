#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "agentarch/rng.hpp"
#include "agentarch/verdict.hpp"

namespace agentarch {

struct EnvRow {
  double r = 0.0;
  int s_next = 0;
  double p = 1.0;

  bool operator==(const EnvRow&) const = default;
};

// A finite Markov decision process given by an explicit kernel
// P(r, s' | s, a). Episodes start at `start_state`; a state is absorbing when
// every action self-loops there with probability 1 and reward 0 (a zero
// sink marks episode end; rewarding self-loops are ordinary dynamics).
struct EnvSpec {
  std::string name;
  std::vector<std::string> states, actions;
  double gamma = 0.9;
  std::map<std::pair<int, int>, std::vector<EnvRow>> kernel;
  int start_state = 0;

  int n_states() const { return static_cast<int>(states.size()); }
  int n_actions() const { return static_cast<int>(actions.size()); }
  const std::vector<EnvRow>& rows(int s, int a) const;
  bool absorbing(int s) const;
  EnvRow sample(int s, int a, Rng& rng) const;
  // States declared, rewards finite, per-(s,a) probabilities sum to 1 +-1e-9.
  Verdict validate() const;
};

// An environment whose kernel may inspect the recent interaction history —
// deliberately non-Markov unless the kernel ignores its history argument.
// Histories are lists of (state, action) pairs, most recent last.
struct HistoryEnv {
  std::string name;
  std::vector<std::string> states, actions;
  double gamma = 0.9;
  int probe_window = 2;  // history length bound used by the Markov probe
  std::function<std::vector<EnvRow>(const std::vector<std::pair<int, int>>&, int, int)> kernel;

  int n_states() const { return static_cast<int>(states.size()); }
  int n_actions() const { return static_cast<int>(actions.size()); }
};

}  // namespace agentarch
