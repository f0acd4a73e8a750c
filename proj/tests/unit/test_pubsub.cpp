#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "iotsim/pads/pubsub.hpp"

using namespace iotsim;

namespace {

struct Live {
  EntityId subscriber;
  Topic topic;
  SimTime since;
};

// Linear scan over every live subscription.
std::vector<EntityId> oracle(const std::vector<Live>& live, const std::vector<Rect>& zones, const Publication& pub) {
  std::set<EntityId> out;
  for (const auto& s : live) {
    if (s.topic.kind != pub.kind) continue;
    if (s.topic.zone && !zones[*s.topic.zone].contains(pub.origin)) continue;
    if (s.topic.product && s.topic.product != pub.product) continue;
    if (s.since > pub.time) continue;
    out.insert(s.subscriber);
  }
  return {out.begin(), out.end()};
}

}  // namespace

TEST_CASE("random subscription churn matches a linear scan") {
  const std::vector<Rect> zones{{0, 0, 500, 500}, {400, 400, 1000, 1000}, {100, 600, 300, 900}};
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<EntityId> who(0, 59);
  std::uniform_int_distribution<int> kind(0, 2), zone(-1, 2), product(-1, 5), coin(0, 2), step(0, 9);
  std::uniform_real_distribution<double> coord(0.0, 1000.0);
  auto random_topic = [&] {
    Topic t;
    t.kind = static_cast<TopicKind>(kind(gen));
    if (const int z = zone(gen); z >= 0) t.zone = static_cast<ZoneId>(z);
    if (const int p = product(gen); p >= 0) t.product = static_cast<ProductTag>(p);
    return t;
  };

  SubscriptionIndex index{ZoneMap(zones)};
  std::vector<Live> live;
  for (int op = 0; op < 500; ++op) {
    const EntityId s = who(gen);
    if (coin(gen) == 0 && !live.empty()) {
      // Unsubscribe something that exists (most of the time).
      const auto& victim = live[std::uniform_int_distribution<std::size_t>(0, live.size() - 1)(gen)];
      const EntityId sub = victim.subscriber;
      const Topic topic = victim.topic;
      CHECK(index.unsubscribe(sub, topic));
      std::erase_if(live, [&](const Live& l) { return l.subscriber == sub && l.topic == topic; });
    } else {
      const Topic t = random_topic();
      const SimTime since{static_cast<std::uint64_t>(step(gen)), 0};
      const bool fresh = std::none_of(live.begin(), live.end(),
                                      [&](const Live& l) { return l.subscriber == s && l.topic == t; });
      CHECK(index.subscribe(s, t, since) == fresh);
      if (fresh) live.push_back({s, t, since});
    }
  }
  CHECK(index.size() == live.size());

  for (int i = 0; i < 50; ++i) {
    Publication pub;
    pub.publisher = who(gen);
    pub.kind = static_cast<TopicKind>(kind(gen));
    if (const int p = product(gen); p >= 0) pub.product = static_cast<ProductTag>(p);
    pub.origin = {coord(gen), coord(gen)};
    pub.time = {static_cast<std::uint64_t>(step(gen)), 0};
    CHECK(publish(pub, index) == oracle(live, zones, pub));
  }
}

TEST_CASE("zone-scoped subscriptions need the origin inside the zone") {
  SubscriptionIndex index{ZoneMap({{0, 0, 10, 10}})};
  index.subscribe(1, {TopicKind::Product, ZoneId{0}, ProductTag{3}}, {0, 0});
  index.subscribe(2, {TopicKind::Product, std::nullopt, ProductTag{3}}, {0, 0});
  index.subscribe(3, {TopicKind::Product, std::nullopt, std::nullopt}, {0, 0});
  Publication inside{9, TopicKind::Product, ProductTag{3}, {5, 5}, {1, 0}};
  Publication outside{9, TopicKind::Product, ProductTag{3}, {50, 5}, {1, 0}};
  CHECK(publish(inside, index) == std::vector<EntityId>{1, 2, 3});
  CHECK(publish(outside, index) == std::vector<EntityId>{2, 3});
}

TEST_CASE("no phantom delivery before a subscription is live") {
  SubscriptionIndex index;
  index.subscribe(4, {TopicKind::Product, std::nullopt, ProductTag{1}}, {5, 0});
  Publication early{0, TopicKind::Product, ProductTag{1}, {}, {4, 0}};
  Publication late{0, TopicKind::Product, ProductTag{1}, {}, {5, 0}};
  CHECK(publish(early, index).empty());
  CHECK(publish(late, index) == std::vector<EntityId>{4});
  index.unsubscribe(4, {TopicKind::Product, std::nullopt, ProductTag{1}});
  CHECK(publish(late, index).empty());
}

TEST_CASE("ops apply in the given order") {
  SubscriptionIndex index;
  const Topic t{TopicKind::Presence, ZoneId{2}, std::nullopt};
  std::vector<SubscriptionOp> ops{{SubscriptionOp::Action::Subscribe, 5, 0, t},
                                  {SubscriptionOp::Action::Unsubscribe, 5, 1, t},
                                  {SubscriptionOp::Action::Subscribe, 6, 0, t}};
  index.apply(ops, {3, 0});
  CHECK_FALSE(index.is_live(5, t));
  CHECK(index.is_live(6, t));
  const auto m = index.members(t);
  CHECK(std::vector<EntityId>(m.begin(), m.end()) == std::vector<EntityId>{6});
  CHECK(index.all().front().since == SimTime{3, 0});
}
