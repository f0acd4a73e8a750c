#pragma once

#include <cstdint>
#include <span>

#include "iotsim/iot/entity.hpp"
#include "iotsim/iot/epidemic.hpp"
#include "iotsim/iot/mobility.hpp"
#include "iotsim/kernel/event.hpp"
#include "iotsim/pads/pubsub.hpp"

namespace iotsim {

enum class FrameType : std::uint8_t { Chat = 1, Dissemination = 2 };

/// RadioFrame payload. 24 bytes, no implicit padding.
struct FrameRecord {
  FrameType type = FrameType::Chat;
  std::uint8_t reserved0 = 0;
  std::uint16_t hop_count = 0;
  std::uint16_t ttl = 0;
  ProductTag topic = 0;
  EntityId origin = 0;
  std::uint32_t reserved1 = 0;
  std::uint64_t msg_id = 0;
};

/// Notification payload. 24 bytes, no implicit padding.
struct NotificationRecord {
  ProductTag product = 0;
  std::uint16_t reserved = 0;
  EntityId producer = 0;
  double x = 0.0;
  double y = 0.0;
};

FrameRecord to_frame(const DisseminationMessage& msg);
DisseminationMessage to_message(const FrameRecord& rec);

/// Uniform grid of presence cells over the area; cell ids are ZoneIds
/// 0..cells_per_side^2-1.
struct PresenceGrid {
  Rect area{0.0, 0.0, 1000.0, 1000.0};
  std::uint32_t cells_per_side = 1;

  ZoneId cell_of(Vec2 p) const;
  Rect cell_rect(ZoneId cell) const;
  std::uint32_t cell_count() const { return cells_per_side * cells_per_side; }
};

inline Topic presence_topic(ZoneId cell) { return Topic{TopicKind::Presence, cell, std::nullopt}; }
inline Topic interest_topic(const Interest& i) { return Topic{TopicKind::Product, i.zone, i.product}; }

struct BehaviorParams {
  std::uint64_t seed = 1;
  double chat_probability = 0.2;
  double publish_probability = 0.02;
  double subscription_churn = 0.01;
  double advert_probability = 0.05;
  double visit_probability = 0.5;
  std::uint32_t dwell_min = 5;
  std::uint32_t dwell_max = 20;
  std::uint16_t ttl = 8;
  bool radio_enabled = true;
};

/// What an entity behavior may do to the world. Implemented by the owning LP,
/// which decides delivery times, routing and cross-level gating.
class BehaviorContext {
 public:
  virtual ~BehaviorContext() = default;

  virtual SimTime now() const = 0;
  /// Entity-to-entity interaction (chat frame or notification).
  virtual void send(TerritoryEntity& from, EntityId to, EventKind kind, const Payload& payload) = 0;
  /// One radio transmission heard by every current neighbor (level >= 1).
  virtual void broadcast(TerritoryEntity& from, const Payload& payload) = 0;
  /// Schedules the entity's next move-update at the next coarse boundary.
  virtual void schedule_tick(TerritoryEntity& e) = 0;
  virtual void publish(TerritoryEntity& from, const Publication& pub) = 0;
  virtual void subscription_op(TerritoryEntity& e, SubscriptionOp::Action action, const Topic& topic) = 0;
  /// Live subscribers of a presence cell, ascending.
  virtual std::span<const EntityId> zone_members(ZoneId cell) const = 0;
  /// Unit-disk neighbors at the current fine step; empty at level 0.
  virtual std::span<const EntityId> radio_neighbors(EntityId id) const = 0;
};

/// Smart-territory entity behaviors: sensors, producers, consumers and relays.
class TerritoryBehavior {
 public:
  TerritoryBehavior(BehaviorParams params, MobilityParams mobility, PresenceGrid grid)
      : params_(params), mobility_(std::move(mobility)), grid_(grid) {}

  void deliver(TerritoryEntity& e, const Event& ev, BehaviorContext& ctx) const;

  void on_tick(TerritoryEntity& e, BehaviorContext& ctx) const;
  void on_frame(TerritoryEntity& e, const Event& ev, BehaviorContext& ctx) const;
  void on_notification(TerritoryEntity& e, const Event& ev, BehaviorContext& ctx) const;

  const BehaviorParams& params() const { return params_; }
  const MobilityParams& mobility() const { return mobility_; }
  const PresenceGrid& grid() const { return grid_; }

 private:
  void chat(TerritoryEntity& e, CounterRng& rng, BehaviorContext& ctx) const;

  BehaviorParams params_;
  MobilityParams mobility_;
  PresenceGrid grid_;
};

}  // namespace iotsim
