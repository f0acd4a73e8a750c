#include <doctest.h>

#include <cmath>
#include <random>

#include "iotsim/core/errors.hpp"
#include "iotsim/iot/market.hpp"
#include "iotsim/iot/mobility.hpp"

using namespace iotsim;

namespace {

TerritoryEntity in_region(EntityId id, Vec2 at, double speed) {
  TerritoryEntity e;
  e.id = id;
  e.mobility = MobilityKind::RandomWaypoint;
  e.position = at;
  e.speed = speed;
  e.level = 1;
  e.region = RegionId{0};
  return e;
}

}  // namespace

TEST_CASE("publishing a product not in stock fails") {
  TerritoryEntity p;
  p.role = Role::Producer;
  p.inventory = {2, 4};
  CHECK_THROWS_AS(producer_publish_availability(p, 3, {1, 0}), NotInInventory);
  const auto pub = producer_publish_availability(p, 4, {1, 0});
  CHECK(pub.product == ProductTag{4});
  CHECK(pub.kind == TopicKind::Product);
}

TEST_CASE("availability reaches exactly the subscribers of the product") {
  TerritoryEntity p;
  p.id = 100;
  p.inventory = {1, 2};
  SubscriptionIndex index;
  CHECK(publish(producer_publish_availability(p, 1, {0, 0}), index).empty());
  for (EntityId c = 1; c <= 5; ++c) index.subscribe(c, {TopicKind::Product, std::nullopt, ProductTag{2}}, {0, 0});
  index.subscribe(9, {TopicKind::Product, std::nullopt, ProductTag{1}}, {0, 0});
  CHECK(publish(producer_publish_availability(p, 2, {0, 0}), index).size() == 5);
}

TEST_CASE("guidance requires both parties in the same refined region") {
  auto c = in_region(1, {0, 0}, 1);
  auto p = in_region(2, {5, 0}, 0);
  CHECK(guide_to_producer(c, p) == Vec2{5, 0});
  CHECK(c.guidance_target == EntityId{2});
  p.region = RegionId{1};
  CHECK_THROWS_AS(guide_to_producer(c, p), NotCoLocated);
  p.region = RegionId{0};
  p.level = 0;
  CHECK_THROWS_AS(guide_to_producer(c, p), NotCoLocated);
}

TEST_CASE("static producer: arrival within ceil(distance / speed) steps") {
  MobilityParams params;
  params.area = {0, 0, 1000, 1000};
  auto c = in_region(1, {100, 100}, 3.0);
  auto p = in_region(2, {140, 130}, 0.0);
  const int bound = static_cast<int>(std::ceil(distance(c.position, p.position) / c.speed));
  std::uint64_t counter = 0;
  int steps = 0;
  bool arrived = false;
  while (!arrived && steps < 100) {
    guide_to_producer(c, p);
    CounterRng rng(1, c.id, counter);
    arrived = move_entity_coarse(c, params, rng).arrived;
    ++steps;
  }
  CHECK(arrived);
  CHECK(steps <= bound);
}

TEST_CASE("the waypoint tracks the producer's latest position") {
  MobilityParams params;
  params.area = {0, 0, 1000, 1000};
  auto c = in_region(1, {100, 100}, 1.0);
  auto p = in_region(2, {300, 100}, 2.0);
  p.waypoint = Vec2{300, 900};
  std::uint64_t cc = 0, pc = 0;
  for (int k = 0; k < 10; ++k) {
    guide_to_producer(c, p);
    CHECK(c.waypoint == p.position);
    CounterRng prng(1, p.id, pc);
    move_entity_coarse(p, params, prng);
    CounterRng crng(1, c.id, cc);
    move_entity_coarse(c, params, crng);
  }
}

TEST_CASE("pursuit across random scenes: arrival iff the consumer is faster") {
  MobilityParams params;
  params.area = {-1e7, -1e7, 1e7, 1e7};
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> coord(0.0, 1000.0), speed(0.5, 5.0), angle(0.0, 6.283185307179586);
  constexpr int kHorizon = 5000;
  int faster = 0;
  for (int scene = 0; scene < 50; ++scene) {
    const Vec2 start{coord(gen), coord(gen)};
    const double theta = angle(gen);
    const Vec2 dir{std::cos(theta), std::sin(theta)};
    const double d0 = 50.0 + coord(gen) / 4.0;
    const double vc = speed(gen);
    double vp = speed(gen);
    if (scene % 10 == 0) vp = vc;  // equal speeds never close the gap
    if (vc > vp && vc - vp < 0.2) vp = vc - 0.2;  // keep catch-up inside the horizon

    auto c = in_region(1, start, vc);
    auto p = in_region(2, start + dir * d0, vp);
    p.waypoint = start + dir * 1e6;  // walks straight away from the consumer

    // Kinematic oracle: on the common line the gap shrinks by vc - vp per
    // step; the consumer arrives at the first step whose gap is <= vc.
    std::optional<int> expected;
    if (vc > vp) expected = static_cast<int>(std::max(0.0, std::ceil((d0 - vc) / (vc - vp))));

    std::uint64_t cc = 0, pc = 0;
    std::optional<int> arrived_at;
    for (int k = 0; k < kHorizon && !arrived_at; ++k) {
      guide_to_producer(c, p);
      CounterRng prng(1, p.id, pc);
      move_entity_coarse(p, params, prng);
      CounterRng crng(1, c.id, cc);
      if (move_entity_coarse(c, params, crng).arrived) arrived_at = k;
    }
    CHECK(arrived_at.has_value() == (vc > vp));
    if (expected && arrived_at) {
      ++faster;
      CHECK(std::abs(*arrived_at - *expected) <= 1);
    }
  }
  CHECK(faster > 0);
}
