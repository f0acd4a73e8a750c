#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "iotsim/core/geometry.hpp"
#include "iotsim/core/ids.hpp"

namespace iotsim {

/// Unit-disk link predicate, boundary inclusive.
inline bool connectivity(Vec2 a, Vec2 b, double range) {
  return distance_squared(a, b) <= range * range;
}

struct Placed {
  EntityId id = 0;
  Vec2 position;
};

/// Neighbor sets under the unit-disk model, built with a uniform grid of
/// range-sized cells. Neighbor lists are ascending and exclude the node.
class NeighborIndex {
 public:
  NeighborIndex() = default;
  NeighborIndex(std::span<const Placed> nodes, double range);

  std::span<const EntityId> neighbors(EntityId id) const;
  std::size_t size() const { return slot_.size(); }

 private:
  std::unordered_map<EntityId, std::uint32_t> slot_;
  std::vector<std::vector<EntityId>> lists_;
};

}  // namespace iotsim
