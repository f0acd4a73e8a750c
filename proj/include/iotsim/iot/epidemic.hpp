#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "iotsim/core/ids.hpp"
#include "iotsim/iot/entity.hpp"

namespace iotsim {

inline constexpr std::uint16_t kUnlimitedTtl = std::numeric_limits<std::uint16_t>::max();

struct DisseminationMessage {
  std::uint64_t msg_id = 0;
  EntityId origin = 0;
  ProductTag topic = 0;
  std::uint16_t hop_count = 0;
  std::uint16_t ttl = kUnlimitedTtl;

  friend bool operator==(const DisseminationMessage&, const DisseminationMessage&) = default;
};

/// msg_id is unique per origin: origin in the high word, the origin's own
/// message counter in the low word.
inline std::uint64_t make_msg_id(EntityId origin, std::uint32_t counter) {
  return (static_cast<std::uint64_t>(origin) << 32) | counter;
}

struct RelayFrame {
  EntityId to = 0;
  DisseminationMessage msg;
};

struct RelayOutcome {
  bool duplicate = false;
  bool delivered = false;  // handed to the local application (interest match)
  std::vector<RelayFrame> forwards;
};

/// Epidemic relay step for one received message. Duplicates are dropped;
/// otherwise the id is recorded, the message is delivered locally if the
/// entity is interested in its topic, and it is forwarded with hop_count+1 to
/// every current neighbor while hop_count < ttl.
RelayOutcome epidemic_relay(TerritoryEntity& e, const DisseminationMessage& msg,
                            std::span<const EntityId> neighbors);

}  // namespace iotsim
