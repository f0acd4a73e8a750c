#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "iotsim/core/geometry.hpp"
#include "iotsim/core/ids.hpp"
#include "iotsim/kernel/sim_time.hpp"

namespace iotsim {

enum class TopicKind : std::uint8_t {
  Presence = 0,  // "I am in this zone"; used for peer discovery at level 0
  Product = 1,   // availability of a product
  Advisory = 2,  // market-wide information
};

/// Structured topic key. A zone restricts matching to publications whose
/// origin lies inside that zone; an absent product matches any product.
struct Topic {
  TopicKind kind = TopicKind::Product;
  std::optional<ZoneId> zone;
  std::optional<ProductTag> product;

  friend auto operator<=>(const Topic&, const Topic&) = default;
  friend bool operator==(const Topic&, const Topic&) = default;
};

struct Subscription {
  EntityId subscriber = 0;
  Topic topic;
  SimTime since;

  friend bool operator==(const Subscription&, const Subscription&) = default;
};

struct Publication {
  EntityId publisher = 0;
  TopicKind kind = TopicKind::Product;
  std::optional<ProductTag> product;
  Vec2 origin;
  SimTime time;
};

struct SubscriptionOp {
  enum class Action : std::uint8_t { Subscribe, Unsubscribe };
  Action action = Action::Subscribe;
  EntityId subscriber = 0;
  /// Issuer's event sequence number; orders ops deterministically.
  std::uint64_t seq = 0;
  Topic topic;
};

/// Rectangles addressed by ZoneId.
class ZoneMap {
 public:
  ZoneMap() = default;
  explicit ZoneMap(std::vector<Rect> zones) : zones_(std::move(zones)) {}

  std::size_t size() const { return zones_.size(); }
  const Rect& at(ZoneId z) const { return zones_.at(z); }
  std::vector<ZoneId> containing(Vec2 p) const;

 private:
  std::vector<Rect> zones_;
};

/// Topic-keyed subscription index: exact match on (kind, zone, product) with
/// region containment applied to zone-scoped subscriptions.
class SubscriptionIndex {
 public:
  SubscriptionIndex() = default;
  explicit SubscriptionIndex(ZoneMap zones) : zones_(std::move(zones)) {}

  /// Returns false if (subscriber, topic) is already live.
  bool subscribe(EntityId subscriber, const Topic& topic, SimTime since);
  /// Returns false if there was nothing to remove.
  bool unsubscribe(EntityId subscriber, const Topic& topic);
  bool is_live(EntityId subscriber, const Topic& topic) const;

  /// Applies ops in the order given; subscriptions become live at `since`.
  void apply(std::span<const SubscriptionOp> ops, SimTime since);

  /// Subscribers of exactly `topic`, ascending.
  std::span<const EntityId> members(const Topic& topic) const;

  /// Every live subscription, sorted by (subscriber, topic).
  std::vector<Subscription> all() const;
  std::size_t size() const { return size_; }
  const ZoneMap& zones() const { return zones_; }

 private:
  friend std::vector<EntityId> publish(const Publication& pub, const SubscriptionIndex& index);

  struct Bucket {
    std::vector<EntityId> ids;
    std::vector<SimTime> since;
  };

  ZoneMap zones_;
  std::map<Topic, Bucket> buckets_;
  std::size_t size_ = 0;
};

/// Recipients of `pub`: exactly the entities holding a matching subscription
/// live at publication time, ascending and without duplicates. The publisher
/// is not excluded.
std::vector<EntityId> publish(const Publication& pub, const SubscriptionIndex& index);

}  // namespace iotsim
