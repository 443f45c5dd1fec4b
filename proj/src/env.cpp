#include "agentarch/env.hpp"

#include <cmath>

#include "agentarch/errors.hpp"

namespace agentarch {

const std::vector<EnvRow>& EnvSpec::rows(int s, int a) const {
  auto it = kernel.find({s, a});
  if (it == kernel.end())
    throw domain_mismatch("environment '" + name + "' has no kernel row for (" +
                          std::to_string(s) + ", " + std::to_string(a) + ")");
  return it->second;
}

bool EnvSpec::absorbing(int s) const {
  for (int a = 0; a < n_actions(); ++a) {
    const std::vector<EnvRow>& rs = rows(s, a);
    if (rs.size() != 1 || rs[0].s_next != s || rs[0].p != 1.0 || rs[0].r != 0.0) return false;
  }
  return true;
}

EnvRow EnvSpec::sample(int s, int a, Rng& rng) const {
  const std::vector<EnvRow>& rs = rows(s, a);
  // Deterministic rows consume no randomness, so degenerate kernels behave
  // identically to deterministic maps under any seed.
  if (rs.size() == 1) return rs[0];
  double u = rng.uniform();
  double acc = 0.0;
  for (const EnvRow& row : rs) {
    acc += row.p;
    if (u < acc) return row;
  }
  return rs.back();
}

Verdict EnvSpec::validate() const {
  Verdict v = Verdict::passed();
  if (states.empty() || actions.empty()) {
    v.status = Verdict::Status::fail;
    v.note("environment needs at least one state and one action");
    return v;
  }
  if (gamma < 0.0 || gamma >= 1.0) {
    v.status = Verdict::Status::fail;
    v.note("gamma must lie in [0, 1)");
  }
  if (start_state < 0 || start_state >= n_states()) {
    v.status = Verdict::Status::fail;
    v.note("start state out of range");
  }
  for (int s = 0; s < n_states(); ++s)
    for (int a = 0; a < n_actions(); ++a) {
      auto it = kernel.find({s, a});
      if (it == kernel.end()) {
        v.status = Verdict::Status::fail;
        v.note("missing kernel row for (" + states[s] + ", " + actions[a] + ")");
        continue;
      }
      double total = 0.0;
      for (const EnvRow& row : it->second) {
        if (!std::isfinite(row.r)) {
          v.status = Verdict::Status::fail;
          v.note("non-finite reward at (" + states[s] + ", " + actions[a] + ")");
        }
        if (row.s_next < 0 || row.s_next >= n_states()) {
          v.status = Verdict::Status::fail;
          v.note("successor out of range at (" + states[s] + ", " + actions[a] + ")");
        }
        if (row.p < 0.0) {
          v.status = Verdict::Status::fail;
          v.note("negative probability at (" + states[s] + ", " + actions[a] + ")");
        }
        total += row.p;
      }
      if (std::abs(total - 1.0) > 1e-9) {
        v.status = Verdict::Status::fail;
        v.note("probabilities at (" + states[s] + ", " + actions[a] + ") sum to " +
               std::to_string(total));
      }
    }
  if (v.ok()) v.note("environment '" + name + "' valid");
  return v;
}

}  // namespace agentarch
