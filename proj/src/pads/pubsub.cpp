#include "iotsim/pads/pubsub.hpp"

#include <algorithm>

namespace iotsim {

std::vector<ZoneId> ZoneMap::containing(Vec2 p) const {
  std::vector<ZoneId> out;
  for (ZoneId z = 0; z < zones_.size(); ++z) {
    if (zones_[z].contains(p)) out.push_back(z);
  }
  return out;
}

bool SubscriptionIndex::subscribe(EntityId subscriber, const Topic& topic, SimTime since) {
  auto& b = buckets_[topic];
  auto it = std::lower_bound(b.ids.begin(), b.ids.end(), subscriber);
  if (it != b.ids.end() && *it == subscriber) return false;
  const auto pos = it - b.ids.begin();
  b.ids.insert(it, subscriber);
  b.since.insert(b.since.begin() + pos, since);
  ++size_;
  return true;
}

bool SubscriptionIndex::unsubscribe(EntityId subscriber, const Topic& topic) {
  auto found = buckets_.find(topic);
  if (found == buckets_.end()) return false;
  auto& b = found->second;
  auto it = std::lower_bound(b.ids.begin(), b.ids.end(), subscriber);
  if (it == b.ids.end() || *it != subscriber) return false;
  const auto pos = it - b.ids.begin();
  b.ids.erase(it);
  b.since.erase(b.since.begin() + pos);
  --size_;
  if (b.ids.empty()) buckets_.erase(found);
  return true;
}

bool SubscriptionIndex::is_live(EntityId subscriber, const Topic& topic) const {
  auto found = buckets_.find(topic);
  if (found == buckets_.end()) return false;
  return std::binary_search(found->second.ids.begin(), found->second.ids.end(), subscriber);
}

void SubscriptionIndex::apply(std::span<const SubscriptionOp> ops, SimTime since) {
  for (const auto& op : ops) {
    if (op.action == SubscriptionOp::Action::Subscribe) {
      subscribe(op.subscriber, op.topic, since);
    } else {
      unsubscribe(op.subscriber, op.topic);
    }
  }
}

std::span<const EntityId> SubscriptionIndex::members(const Topic& topic) const {
  auto found = buckets_.find(topic);
  if (found == buckets_.end()) return {};
  return found->second.ids;
}

std::vector<Subscription> SubscriptionIndex::all() const {
  std::vector<Subscription> out;
  out.reserve(size_);
  for (const auto& [topic, b] : buckets_) {
    for (std::size_t i = 0; i < b.ids.size(); ++i) out.push_back({b.ids[i], topic, b.since[i]});
  }
  std::sort(out.begin(), out.end(), [](const Subscription& a, const Subscription& b) {
    if (a.subscriber != b.subscriber) return a.subscriber < b.subscriber;
    return a.topic < b.topic;
  });
  return out;
}

std::vector<EntityId> publish(const Publication& pub, const SubscriptionIndex& index) {
  std::vector<std::optional<ZoneId>> zones{std::nullopt};
  for (ZoneId z : index.zones_.containing(pub.origin)) zones.emplace_back(z);
  std::vector<std::optional<ProductTag>> products{std::nullopt};
  if (pub.product) products.push_back(pub.product);

  std::vector<EntityId> out;
  for (const auto& zone : zones) {
    for (const auto& product : products) {
      auto found = index.buckets_.find(Topic{pub.kind, zone, product});
      if (found == index.buckets_.end()) continue;
      const auto& b = found->second;
      for (std::size_t i = 0; i < b.ids.size(); ++i) {
        if (b.since[i] <= pub.time) out.push_back(b.ids[i]);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace iotsim
