#include "iotsim/iot/mobility.hpp"

namespace iotsim {

std::optional<Vec2> draw_waypoint(TerritoryEntity& e, const MobilityParams& params, CounterRng& rng) {
  const Rect& area = params.area;
  switch (e.mobility) {
    case MobilityKind::Static:
      return std::nullopt;
    case MobilityKind::RandomWaypoint:
      return Vec2{rng.uniform(area.x0, area.x1), rng.uniform(area.y0, area.y1)};
    case MobilityKind::Market:
      return Vec2{rng.uniform(e.home.x0, e.home.x1), rng.uniform(e.home.y0, e.home.y1)};
    case MobilityKind::Clustered: {
      const auto n = static_cast<std::uint32_t>(params.cluster_centers.size());
      if (n == 0) return Vec2{rng.uniform(area.x0, area.x1), rng.uniform(area.y0, area.y1)};
      if (n > 1 && rng.bernoulli(params.cluster_switch_probability)) {
        // uniform over the other clusters
        const std::uint32_t pick = rng.below(n - 1);
        e.group = pick >= e.group ? pick + 1 : pick;
      }
      const Vec2 c = params.cluster_centers[e.group % n];
      const double dx = rng.normal() * params.cluster_sigma;
      const double dy = rng.normal() * params.cluster_sigma;
      return area.clamp({c.x + dx, c.y + dy});
    }
    case MobilityKind::Scripted:
      if (e.route_index < e.route.size()) return e.route[e.route_index++];
      return std::nullopt;
  }
  return std::nullopt;
}

MoveResult move_entity_coarse(TerritoryEntity& e, const MobilityParams& params, CounterRng& rng) {
  e.fine_from = e.position;
  if (!e.waypoint) e.waypoint = draw_waypoint(e, params, rng);
  if (!e.waypoint || e.speed <= 0.0) return {e.position, false};

  const Vec2 target = *e.waypoint;
  const double remaining = distance(e.position, target);
  if (remaining <= e.speed) {
    e.position = target;
    e.waypoint = draw_waypoint(e, params, rng);
    return {e.position, true};
  }
  const Vec2 step = (target - e.position) * (e.speed / remaining);
  e.position = params.area.clamp(e.position + step);
  return {e.position, false};
}

Vec2 fine_position_at(const TerritoryEntity& e, std::uint32_t phase, std::uint32_t ratio) {
  if (phase == 0) return e.fine_from;
  if (phase >= ratio) return e.position;
  const double f = static_cast<double>(phase) / ratio;
  return e.fine_from + (e.position - e.fine_from) * f;
}

Vec2 move_entity_fine(const TerritoryEntity& e, std::uint32_t phase, std::uint32_t ratio) {
  return fine_position_at(e, phase + 1, ratio);
}

}  // namespace iotsim
