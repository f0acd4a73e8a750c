#include "iotsim/iot/epidemic.hpp"

#include <algorithm>

namespace iotsim {

RelayOutcome epidemic_relay(TerritoryEntity& e, const DisseminationMessage& msg,
                            std::span<const EntityId> neighbors) {
  RelayOutcome out;
  if (e.seen.contains(msg.msg_id)) {
    out.duplicate = true;
    return out;
  }
  e.seen.insert(msg.msg_id);
  out.delivered = std::any_of(e.interests.begin(), e.interests.end(),
                              [&](const Interest& i) { return i.product == msg.topic; });
  if (out.delivered) ++e.counters.app_deliveries;
  if (msg.ttl != kUnlimitedTtl && msg.hop_count >= msg.ttl) return out;

  DisseminationMessage next = msg;
  if (next.hop_count < kUnlimitedTtl - 1) ++next.hop_count;
  out.forwards.reserve(neighbors.size());
  for (EntityId n : neighbors) {
    if (n != e.id) out.forwards.push_back({n, next});
  }
  return out;
}

}  // namespace iotsim
