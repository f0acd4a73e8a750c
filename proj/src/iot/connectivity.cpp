#include "iotsim/iot/connectivity.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace iotsim {

NeighborIndex::NeighborIndex(std::span<const Placed> nodes, double range) {
  lists_.resize(nodes.size());
  slot_.reserve(nodes.size());
  for (std::uint32_t i = 0; i < nodes.size(); ++i) slot_.emplace(nodes[i].id, i);
  if (nodes.empty() || range <= 0.0) return;

  using Cell = std::pair<std::int64_t, std::int64_t>;
  auto cell_of = [range](Vec2 p) {
    return Cell{static_cast<std::int64_t>(std::floor(p.x / range)),
                static_cast<std::int64_t>(std::floor(p.y / range))};
  };
  std::map<Cell, std::vector<std::uint32_t>> grid;
  for (std::uint32_t i = 0; i < nodes.size(); ++i) grid[cell_of(nodes[i].position)].push_back(i);

  for (std::uint32_t i = 0; i < nodes.size(); ++i) {
    const auto [cx, cy] = cell_of(nodes[i].position);
    auto& out = lists_[i];
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto found = grid.find({cx + dx, cy + dy});
        if (found == grid.end()) continue;
        for (std::uint32_t j : found->second) {
          if (j != i && connectivity(nodes[i].position, nodes[j].position, range)) out.push_back(nodes[j].id);
        }
      }
    }
    std::sort(out.begin(), out.end());
  }
}

std::span<const EntityId> NeighborIndex::neighbors(EntityId id) const {
  auto found = slot_.find(id);
  if (found == slot_.end()) return {};
  return lists_[found->second];
}

}  // namespace iotsim
