#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string_view>
#include <vector>

#include "iotsim/core/geometry.hpp"
#include "iotsim/core/ids.hpp"

namespace iotsim {

enum class Role : std::uint8_t { Sensor = 0, Producer = 1, Consumer = 2, Relay = 3 };

enum class MobilityKind : std::uint8_t {
  Static = 0,
  RandomWaypoint = 1,  // uniform waypoints over the whole area
  Clustered = 2,       // gaussian waypoints around the current cluster centre
  Market = 3,          // uniform waypoints inside the entity's home rectangle
  Scripted = 4,        // fixed route, then stop
};

std::string_view to_string(Role r);

/// Bounded duplicate filter for epidemic relaying; FIFO eviction.
class SeenMessages {
 public:
  SeenMessages() = default;
  explicit SeenMessages(std::uint32_t capacity) : capacity_(capacity) {}

  bool contains(std::uint64_t msg_id) const;
  void insert(std::uint64_t msg_id);
  std::uint32_t capacity() const { return capacity_; }
  const std::deque<std::uint64_t>& ids() const { return ids_; }

  friend bool operator==(const SeenMessages&, const SeenMessages&) = default;

 private:
  std::uint32_t capacity_ = 64;
  std::deque<std::uint64_t> ids_;
};

/// Present only while the entity lives at level >= 1.
struct RadioState {
  double range = 0.0;
  std::vector<EntityId> neighbor_cache;
  std::uint64_t budget_slot = 0;  // fine-step index the counter below refers to
  std::uint32_t frames_in_slot = 0;

  friend bool operator==(const RadioState&, const RadioState&) = default;
};

struct Interest {
  ProductTag product = 0;
  std::optional<ZoneId> zone;
  bool subscribed = false;

  friend bool operator==(const Interest&, const Interest&) = default;
};

struct EntityCounters {
  std::uint64_t chats_sent = 0;
  std::uint64_t chats_received = 0;
  std::uint64_t notifications_received = 0;
  std::uint64_t publications = 0;
  std::uint64_t adverts = 0;
  std::uint64_t frames_received = 0;
  std::uint64_t frames_forwarded = 0;
  std::uint64_t frames_dropped = 0;
  std::uint64_t app_deliveries = 0;

  friend bool operator==(const EntityCounters&, const EntityCounters&) = default;
};

/// One simulated entity of the smart-territory model: the smallest migratable
/// model component. Everything the entity needs to continue on another LP is
/// in here, including its RNG draw counter and event sequence counter.
struct TerritoryEntity {
  EntityId id = 0;
  Role role = Role::Relay;
  MobilityKind mobility = MobilityKind::RandomWaypoint;
  std::uint32_t group = 0;  // current cluster for clustered mobility
  Rect home;                // waypoint area for market mobility

  Vec2 position;
  Vec2 fine_from;  // window start position while refined
  double speed = 0.0;  // metres per coarse step
  std::optional<Vec2> waypoint;
  std::vector<Vec2> route;
  std::uint32_t route_index = 0;
  std::uint32_t dwell = 0;
  std::optional<EntityId> guidance_target;

  std::vector<ProductTag> inventory;
  std::vector<Interest> interests;
  ZoneId presence_cell = 0;
  SeenMessages seen;

  std::uint32_t level = 0;
  std::optional<RegionId> region;
  std::optional<RadioState> radio;

  std::uint64_t rng_counter = 0;
  std::uint64_t next_seq = 0;
  std::uint32_t next_msg = 0;
  EntityCounters counters;

  friend bool operator==(const TerritoryEntity&, const TerritoryEntity&) = default;
};

}  // namespace iotsim
