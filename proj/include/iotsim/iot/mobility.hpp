#pragma once

#include <cstdint>
#include <vector>

#include "iotsim/core/geometry.hpp"
#include "iotsim/iot/entity.hpp"
#include "iotsim/kernel/rng.hpp"

namespace iotsim {

struct MobilityParams {
  Rect area{0.0, 0.0, 1000.0, 1000.0};
  std::vector<Vec2> cluster_centers;
  double cluster_sigma = 50.0;
  double cluster_switch_probability = 0.0;
};

/// Draws the next waypoint according to the entity's mobility policy. For a
/// scripted entity this consumes the next route point (none when exhausted).
std::optional<Vec2> draw_waypoint(TerritoryEntity& e, const MobilityParams& params, CounterRng& rng);

struct MoveResult {
  Vec2 position;
  bool arrived = false;
};

/// One level-0 step: advance toward the waypoint by min(speed, remaining);
/// on arrival snap to it and draw the next waypoint. `fine_from` is set to the
/// start position so a fine window can interpolate the same displacement.
MoveResult move_entity_coarse(TerritoryEntity& e, const MobilityParams& params, CounterRng& rng);

/// Position after fine step `phase` of a window of `ratio` steps that covers
/// the coarse move from `e.fine_from` to `e.position`. Each fine step covers
/// 1/ratio of the displacement and the last one lands exactly on the coarse
/// result.
Vec2 move_entity_fine(const TerritoryEntity& e, std::uint32_t phase, std::uint32_t ratio);

/// Position at the start of fine step `phase` (phase 0 is the window start).
Vec2 fine_position_at(const TerritoryEntity& e, std::uint32_t phase, std::uint32_t ratio);

}  // namespace iotsim
