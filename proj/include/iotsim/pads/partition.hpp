#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "iotsim/core/geometry.hpp"
#include "iotsim/core/ids.hpp"
#include "iotsim/pads/routing_table.hpp"

namespace iotsim {

enum class PartitionStrategy { RoundRobin, SpatialGrid };

std::string_view to_string(PartitionStrategy s);

struct EntityDescriptor {
  EntityId id = 0;
  Vec2 position;
};

/// Splits `area` into `n_lps` contiguous rectangles by recursive bisection
/// along the longer side, proportionally to the number of LPs on each side.
/// Block i belongs to LP i.
std::vector<Rect> spatial_blocks(const Rect& area, std::uint32_t n_lps);

/// Initial model partitioning. Round-robin deals entities out in id order, so
/// LP sizes differ by at most one. Spatial-grid assigns each entity to the
/// LP owning the area block that contains it.
RoutingTable partition_entities(std::span<const EntityDescriptor> entities, std::uint32_t n_lps,
                                PartitionStrategy strategy, const Rect& area);

}  // namespace iotsim
