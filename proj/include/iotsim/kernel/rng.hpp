#pragma once

#include <array>
#include <cstdint>

namespace iotsim {

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based generator bound to one entity. Every draw is a pure
/// function of (seed, stream, draw counter), so a sequence does not depend on
/// which LP hosts the entity or on how many LPs there are. The draw counter
/// lives in the entity state and travels with it on migration.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint32_t stream, std::uint64_t& counter)
      : seed_(seed), stream_(stream), counter_(&counter) {}

  std::uint64_t next_u64();
  /// Uniform in [0, 1), 53-bit resolution.
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Uniform integer in [0, n); n must be > 0.
  std::uint32_t below(std::uint32_t n);
  bool bernoulli(double p) { return p > 0.0 && uniform01() < p; }
  /// Standard normal via Box-Muller (two draws).
  double normal();

 private:
  std::uint64_t seed_;
  std::uint32_t stream_;
  std::uint64_t* counter_;
};

}  // namespace iotsim
