#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace iotsim {

/// Two-level simulation clock. `coarse_step` counts level-0 timesteps;
/// `fine_phase` is the position inside the current coarse step for entities
/// living in a refined region (always 0 at level 0). Ordering is
/// lexicographic, so (k, 0) is the coarse boundary t_k.
struct SimTime {
  std::uint64_t coarse_step = 0;
  std::uint32_t fine_phase = 0;

  friend constexpr auto operator<=>(const SimTime&, const SimTime&) = default;

  constexpr bool on_boundary() const { return fine_phase == 0; }

  static constexpr SimTime boundary(std::uint64_t step) { return {step, 0}; }

  std::string str() const {
    return "(" + std::to_string(coarse_step) + "," + std::to_string(fine_phase) + ")";
  }
};

/// The next coarse boundary strictly after `t`.
constexpr SimTime next_boundary(SimTime t) { return {t.coarse_step + 1, 0}; }

/// The next fine step after `t` for a window of `ratio` phases per coarse
/// step; the last phase rolls over onto the next boundary.
constexpr SimTime next_fine_step(SimTime t, std::uint32_t ratio) {
  if (t.fine_phase + 1 < ratio) return {t.coarse_step, t.fine_phase + 1};
  return next_boundary(t);
}

}  // namespace iotsim
