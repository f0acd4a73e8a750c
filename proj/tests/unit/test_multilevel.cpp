#include <doctest.h>

#include <random>
#include <stdexcept>
#include <vector>

#include "iotsim/core/errors.hpp"
#include "iotsim/multilevel/fine_window.hpp"
#include "iotsim/multilevel/region.hpp"

using namespace iotsim;

namespace {

RefinementRegion region(RegionId id, std::uint32_t hi = 50, std::uint32_t lo = 30) {
  RefinementRegion r;
  r.id = id;
  r.bounds = {0, 0, 100, 100};
  r.trigger.theta_hi = hi;
  r.trigger.theta_lo = lo;
  return r;
}

void apply(std::vector<RefinementRegion>& regions, const std::vector<RegionAction>& actions, SimTime at) {
  for (const auto& a : actions) {
    for (auto& r : regions) {
      if (r.id != a.region) continue;
      if (a.kind == RegionActionKind::Refine) {
        refine_region(r, at, {}, 50.0);
      } else {
        coarsen_region(r, at, {});
      }
    }
  }
}

}  // namespace

TEST_CASE("refine fires at theta_hi, not below") {
  std::vector<RefinementRegion> rs{region(0)};
  std::vector<std::uint32_t> c{49};
  CHECK(check_refinement_triggers(rs, c, {3, 0}).empty());
  c[0] = 50;
  const auto a = check_refinement_triggers(rs, c, {3, 0});
  REQUIRE(a.size() == 1);
  CHECK(a[0].kind == RegionActionKind::Refine);
  CHECK(a[0].resident_count == 50);
}

TEST_CASE("coarsen fires at theta_lo") {
  std::vector<RefinementRegion> rs{region(0)};
  refine_region(rs[0], {1, 0}, {}, 50.0);
  std::vector<std::uint32_t> c{31};
  CHECK(check_refinement_triggers(rs, c, {2, 0}).empty());
  c[0] = 30;
  const auto a = check_refinement_triggers(rs, c, {2, 0});
  REQUIRE(a.size() == 1);
  CHECK(a[0].kind == RegionActionKind::Coarsen);
}

TEST_CASE("oscillation inside the hysteresis band refines once and never coarsens") {
  std::vector<RefinementRegion> rs{region(0)};
  int refines = 0, coarsens = 0;
  for (std::uint64_t k = 0; k < 200; ++k) {
    std::vector<std::uint32_t> c{k % 2 == 0 ? 45U : 55U};
    const auto actions = check_refinement_triggers(rs, c, {k, 0});
    for (const auto& a : actions) (a.kind == RegionActionKind::Refine ? refines : coarsens)++;
    apply(rs, actions, {k, 0});
  }
  CHECK(refines == 1);
  CHECK(coarsens == 0);
}

TEST_CASE("schedules override thresholds") {
  std::vector<RefinementRegion> rs{region(0)};
  rs[0].trigger.schedule = {{2, 4}};
  std::vector<std::uint32_t> c{0};
  CHECK(check_refinement_triggers(rs, c, {1, 0}).empty());
  auto a = check_refinement_triggers(rs, c, {2, 0});
  REQUIRE(a.size() == 1);
  apply(rs, a, {2, 0});
  CHECK(check_refinement_triggers(rs, c, {3, 0}).empty());
  a = check_refinement_triggers(rs, c, {4, 0});
  REQUIRE(a.size() == 1);
  CHECK(a[0].kind == RegionActionKind::Coarsen);
}

TEST_CASE("a child region needs a refined parent and coarsens with it") {
  std::vector<RefinementRegion> rs{region(0), region(1, 10, 5)};
  rs[1].parent = 0;
  rs[1].depth = 2;
  std::vector<std::uint32_t> c{20, 20};
  auto a = check_refinement_triggers(rs, c, {0, 0});
  CHECK(a.empty());  // parent below its threshold
  c[0] = 60;
  a = check_refinement_triggers(rs, c, {1, 0});
  REQUIRE(a.size() == 2);
  apply(rs, a, {1, 0});
  CHECK(rs[1].level == 2);
  c[0] = 10;  // parent empties, child still crowded
  a = check_refinement_triggers(rs, c, {2, 0});
  REQUIRE(a.size() == 2);
  CHECK(a[0].kind == RegionActionKind::Coarsen);
  CHECK(a[1].kind == RegionActionKind::Coarsen);
}

TEST_CASE("level transitions off a coarse boundary are fatal") {
  auto r = region(0);
  std::vector<RefinementRegion> rs{r};
  std::vector<std::uint32_t> c{60};
  CHECK_THROWS_AS(check_refinement_triggers(rs, c, {3, 1}), MidStepRefinement);
  CHECK_THROWS_AS(refine_region(r, {3, 2}, {}, 50.0), MidStepRefinement);
  refine_region(r, {3, 0}, {}, 50.0);
  CHECK_THROWS_AS(refine_region(r, {4, 0}, {}, 50.0), MidStepRefinement);
  CHECK_THROWS_AS(coarsen_region(r, {4, 1}, {}), MidStepCoarsening);
  coarsen_region(r, {4, 0}, {});
  CHECK_THROWS_AS(coarsen_region(r, {5, 0}, {}), MidStepCoarsening);
}

TEST_CASE("empty region refine and coarsen only flip the level") {
  auto r = region(0);
  refine_region(r, {2, 0}, {}, 50.0);
  CHECK(r.level == 1);
  CHECK(r.refined_at == 2);
  coarsen_region(r, {3, 0}, {});
  CHECK(r.level == 0);
  CHECK(r.residents.empty());
}

TEST_CASE("lift keeps position bit-identical and drop undoes it") {
  auto r = region(0);
  std::vector<TerritoryEntity> ents(10);
  std::vector<TerritoryEntity*> ptrs;
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> coord(0.0, 100.0);
  for (EntityId i = 0; i < ents.size(); ++i) {
    ents[i].id = i;
    ents[i].position = {coord(gen), coord(gen)};
    ptrs.push_back(&ents[i]);
  }
  const auto before = ents;
  refine_region(r, {2, 0}, ptrs, 40.0);
  for (std::size_t i = 0; i < ents.size(); ++i) {
    CHECK(ents[i].position == before[i].position);
    CHECK(ents[i].level == 1);
    REQUIRE(ents[i].radio.has_value());
    CHECK(ents[i].radio->range == 40.0);
    CHECK(ents[i].radio->neighbor_cache.empty());
  }
  coarsen_region(r, {3, 0}, ptrs);
  CHECK(ents == before);
}

TEST_CASE("cross-level gate examples") {
  Event ev;
  ev.time = {5, 1};
  CHECK(gate_cross_level_event(ev, 1, 0, {5, 1}) == SimTime{6, 0});
  ev.time = {5, 0};
  CHECK(gate_cross_level_event(ev, 0, 1, {5, 0}) == SimTime{6, 0});
}

TEST_CASE("gated deliveries land on a later boundary") {
  std::mt19937_64 gen(8);
  std::uniform_int_distribution<std::uint64_t> step(0, 1000);
  std::uniform_int_distribution<std::uint32_t> phase(0, 8), level(0, 2);
  for (int i = 0; i < 100; ++i) {
    Event ev;
    ev.time = {step(gen), phase(gen)};
    std::uint32_t src = level(gen), dst = level(gen);
    if (src == dst) dst = (dst + 1) % 3;
    const SimTime at = gate_cross_level_event(ev, src, dst, ev.time);
    CHECK(at.fine_phase == 0);
    CHECK(at > ev.time);
    CHECK(at.coarse_step == ev.time.coarse_step + 1);
  }
}

TEST_CASE("level clock map reproduces the three-step example") {
  // Refined at t_2 with R = 3: t_2 is t'_1, and t_2 -> t_3 updates t'_2..t'_4.
  const LevelClockMap m(2, 3);
  CHECK(m.fine_index_of(2) == 1);
  CHECK(m.window(2) == std::pair<std::uint64_t, std::uint64_t>{2, 4});
  CHECK(m.fine_index_of(3) == 4);
  CHECK(m.window(3) == std::pair<std::uint64_t, std::uint64_t>{5, 7});
  const LevelClockMap unit(0, 1);
  CHECK(unit.window(4) == std::pair<std::uint64_t, std::uint64_t>{6, 6});
}

TEST_CASE("fine window runs exactly R phases in order") {
  FineWindow w(0, 3, 7, {4, 2, 9}, 10.0);
  CHECK(w.is_resident(2));
  CHECK_FALSE(w.is_resident(3));
  const std::vector<Placed> pos{{2, {0, 0}}, {4, {5, 0}}, {9, {50, 0}}};
  CHECK_THROWS_AS(w.begin_phase(1, pos), std::logic_error);
  w.begin_phase(0, pos);
  const auto n = w.neighbors(2);
  CHECK(std::vector<EntityId>(n.begin(), n.end()) == std::vector<EntityId>{4});
  w.begin_phase(1, pos);
  Event held;
  held.dst = 100;
  w.hold(held);
  CHECK_THROWS_AS(w.close(), std::logic_error);
  w.begin_phase(2, pos);
  CHECK_THROWS_AS(w.begin_phase(3, pos), std::logic_error);
  const auto out = w.close();
  REQUIRE(out.size() == 1);
  CHECK(out[0].dst == 100);
}

TEST_CASE("nested ratios compose") {
  std::vector<RefinementRegion> rs{region(0), region(1)};
  rs[0].ratio = 3;
  rs[1].parent = 0;
  rs[1].ratio = 2;
  CHECK(effective_ratio(rs[0], rs) == 3);
  CHECK(effective_ratio(rs[1], rs) == 6);
}
