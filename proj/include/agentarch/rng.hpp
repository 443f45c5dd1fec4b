#pragma once

#include <cstdint>
#include <random>

namespace agentarch {

// Seeded splittable generator. All stochastic code threads one of these
// explicitly — no global RNG state — so every run is reproducible from the
// seed alone and concurrent evaluations cannot interleave draws.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() {
    // 53 mantissa bits; avoids distribution-object implementation drift.
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  int below(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }

  // Derive an independent child stream; the parent advances by one draw.
  Rng split() { return Rng(engine_() ^ 0x9e3779b97f4a7c15ULL); }

  std::uint64_t seed() const { return seed_; }

private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

}  // namespace agentarch
