#pragma once

#include <cstdint>

namespace qtraj {

/// Self-contained xoshiro256++ stream seeded through splitmix64. Ensemble
/// results must be bit-identical across platforms and thread schedules, so
/// no std::random_engine / std::distribution state is used anywhere.
class RandomStream {
  public:
    /// salt separates independent streams derived from the same user seed
    /// (e.g. the initial-position sampler vs. a trajectory's noise).
    explicit RandomStream(std::uint64_t seed, std::uint64_t salt = 0);

    std::uint64_t next_u64();

    /// Uniform in [0, 1) with 53 random bits.
    double uniform();

    /// Uniform in (0, 1), never exactly zero.
    double uniform_open();

    /// Standard normal via Box-Muller; consumes two uniforms per pair.
    double normal();

  private:
    std::uint64_t s_[4];
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace qtraj
