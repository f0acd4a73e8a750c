#include "iotsim/pads/routing_table.hpp"

#include <string>

#include "iotsim/core/errors.hpp"

namespace iotsim {

LpId RoutingTable::lp_of(EntityId id) const {
  if (!contains(id)) throw UnknownEntity("entity " + std::to_string(id) + " is not in the routing table");
  return owner_[id];
}

void RoutingTable::assign(EntityId id, LpId lp) {
  if (id >= owner_.size()) owner_.resize(static_cast<std::size_t>(id) + 1, kNoLp);
  if (owner_[id] == kNoLp) ++count_;
  owner_[id] = lp;
}

void RoutingTable::erase(EntityId id) {
  if (!contains(id)) return;
  owner_[id] = kNoLp;
  --count_;
}

std::vector<std::uint32_t> RoutingTable::hosted_counts(std::uint32_t n_lps) const {
  std::vector<std::uint32_t> counts(n_lps, 0);
  for (LpId lp : owner_) {
    if (lp != kNoLp) ++counts.at(lp);
  }
  return counts;
}

std::vector<EntityId> RoutingTable::hosted_by(LpId lp) const {
  std::vector<EntityId> out;
  for (EntityId id = 0; id < owner_.size(); ++id) {
    if (owner_[id] == lp) out.push_back(id);
  }
  return out;
}

}  // namespace iotsim
