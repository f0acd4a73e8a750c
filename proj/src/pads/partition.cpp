#include "iotsim/pads/partition.hpp"

#include <algorithm>
#include <stdexcept>

namespace iotsim {

std::string_view to_string(PartitionStrategy s) {
  return s == PartitionStrategy::RoundRobin ? "round_robin" : "spatial_grid";
}

namespace {

void bisect(const Rect& r, std::uint32_t n, std::vector<Rect>& out) {
  if (n == 1) {
    out.push_back(r);
    return;
  }
  const std::uint32_t left = n / 2;
  const double frac = static_cast<double>(left) / n;
  if (r.width() >= r.height()) {
    const double cut = r.x0 + r.width() * frac;
    bisect({r.x0, r.y0, cut, r.y1}, left, out);
    bisect({cut, r.y0, r.x1, r.y1}, n - left, out);
  } else {
    const double cut = r.y0 + r.height() * frac;
    bisect({r.x0, r.y0, r.x1, cut}, left, out);
    bisect({r.x0, cut, r.x1, r.y1}, n - left, out);
  }
}

}  // namespace

std::vector<Rect> spatial_blocks(const Rect& area, std::uint32_t n_lps) {
  if (n_lps == 0) throw std::invalid_argument("n_lps must be >= 1");
  std::vector<Rect> out;
  out.reserve(n_lps);
  bisect(area, n_lps, out);
  return out;
}

RoutingTable partition_entities(std::span<const EntityDescriptor> entities, std::uint32_t n_lps,
                                PartitionStrategy strategy, const Rect& area) {
  if (n_lps == 0) throw std::invalid_argument("n_lps must be >= 1");
  RoutingTable table;
  if (strategy == PartitionStrategy::RoundRobin) {
    std::vector<EntityId> ids;
    ids.reserve(entities.size());
    for (const auto& e : entities) ids.push_back(e.id);
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 0; i < ids.size(); ++i) table.assign(ids[i], static_cast<LpId>(i % n_lps));
    return table;
  }
  const auto blocks = spatial_blocks(area, n_lps);
  for (const auto& e : entities) {
    const Vec2 p = area.clamp(e.position);
    LpId lp = 0;
    for (LpId b = 0; b < blocks.size(); ++b) {
      if (blocks[b].contains(p)) {
        lp = b;
        break;
      }
    }
    table.assign(e.id, lp);
  }
  return table;
}

}  // namespace iotsim
