// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "iotsim/harness/simulation.hpp"
#include "iotsim/iot/epidemic.hpp"
#include "iotsim/pads/pubsub.hpp"
#include "iotsim/pads/runtime.hpp"

using namespace iotsim;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

ScenarioConfig smart_market() {
  return load_scenario(std::filesystem::path(IOTSIM_SCENARIO_DIR) / "smart-market.cfg");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome sequential_equivalence() {
  std::string detail;
  bool pass = true;
  for (std::uint64_t seed : {1, 2, 3}) {
    ScenarioConfig c = smart_market();
    c.seed = seed;
    std::optional<RunDigest> ref;
    double slowest = 0.0;
    for (bool migration : {false, true}) {
      for (std::uint32_t lps : {1U, 2U, 4U, 8U}) {
        c.n_lps = lps;
        c.migration_enabled = migration;
        const auto t0 = std::chrono::steady_clock::now();
        const RunResult r = run_simulation(c);
        slowest = std::max(slowest, seconds_since(t0));
        if (!ref) ref = r.digest;
        if (r.digest != *ref) {
          pass = false;
          std::printf("  seed %llu lps %u migration %d digest %s differs from %s\n",
                      static_cast<unsigned long long>(seed), lps, migration, r.digest.hex.c_str(), ref->hex.c_str());
        }
      }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "seed %llu %.12s.. slowest %.1fs; ", static_cast<unsigned long long>(seed),
                  ref->hex.c_str(), slowest);
    detail += buf;
  }
  return {pass, detail + "8 configurations per seed"};
}

Outcome barrier_safety() {
  ScenarioConfig c = smart_market();
  c.n_lps = 8;
  c.total_coarse_steps = 1000;
  c.migration_enabled = true;
  const RunResult plain = run_simulation(c);
  c.inject_delay_us = 200;
  const RunResult delayed = run_simulation(c);
  const auto audit = check_barrier_audit(delayed.runtime.audit);
  const auto late = delayed.runtime.counters.late_deliveries;
  const bool pass = audit.overlaps == 0 && audit.malformed == 0 && late == 0 && audit.steps_checked == 999 &&
                    delayed.digest == plain.digest;
  char buf[200];
  std::snprintf(buf, sizeof buf, "steps audited %llu overlaps %llu malformed %llu late %llu digest %s",
                static_cast<unsigned long long>(audit.steps_checked), static_cast<unsigned long long>(audit.overlaps),
                static_cast<unsigned long long>(audit.malformed), static_cast<unsigned long long>(late),
                delayed.digest == plain.digest ? "equal" : "DIFFERENT");
  return {pass, buf};
}

// A column of 60 relays walks right at 1 m/step through a 100 m wide strip.
// Positions seen at boundary k are x = 300.5 + k, so the group is inside for
// boundaries 100..199.
ScenarioConfig scripted_crossing() {
  ScenarioConfig c;
  c.seed = 7;
  c.width = 1000;
  c.height = 1000;
  c.relays = 200;
  ScriptedGroup g;
  g.count = 60;
  g.start = {300.5, 320.0};
  g.spacing = {0.0, 6.0};
  g.route = {{990.5, 320.0}};
  g.speed = 1.0;
  c.scripted = {g};
  c.presence_grid = 4;
  c.radio_range = 30;
  c.chat_probability = 0.3;
  c.total_coarse_steps = 260;
  c.n_lps = 4;
  c.migration_enabled = true;
  c.trace = TraceVerbosity::Full;
  c.multilevel_enabled = true;
  RegionConfig region;
  region.bounds = {400, 300, 500, 700};
  region.ratio = 3;
  region.theta_hi = 50;
  region.theta_lo = 30;
  region.market = false;
  c.regions = {region};
  return c;
}

Outcome multilevel_semantics() {
  const ScenarioConfig c = scripted_crossing();
  const RunResult r = run_simulation(c);
  std::vector<std::uint64_t> refines, coarsens;
  for (const auto& plan : r.runtime.plans) {
    for (const auto& a : plan.actions) {
      (a.kind == RegionActionKind::Refine ? refines : coarsens).push_back(plan.step);
    }
  }
  const auto& k = r.runtime.counters;
  bool trace_ok = true;
  for (const auto& rec : r.runtime.trace) {
    if (rec.src_level != rec.dst_level && rec.key.time.fine_phase != 0) trace_ok = false;
  }
  const bool population_ok = std::all_of(r.metrics.population.begin(), r.metrics.population.end(),
                                         [&](std::uint64_t p) { return p == c.population(); });
  const bool pass = refines == std::vector<std::uint64_t>{100} && coarsens == std::vector<std::uint64_t>{200} &&
                    k.fine_window_violations == 0 && k.fine_windows == 100 && k.fine_steps == 3 * k.fine_windows &&
                    k.cross_level_deliveries > 0 && k.cross_level_off_boundary == 0 && trace_ok && population_ok;
  char buf[300];
  std::snprintf(buf, sizeof buf,
                "refine at %s coarsen at %s; windows %llu fine steps %llu; cross-level %llu off-boundary %llu; "
                "population %s",
                refines.size() == 1 ? std::to_string(refines[0]).c_str() : "?",
                coarsens.size() == 1 ? std::to_string(coarsens[0]).c_str() : "?",
                static_cast<unsigned long long>(k.fine_windows), static_cast<unsigned long long>(k.fine_steps),
                static_cast<unsigned long long>(k.cross_level_deliveries),
                static_cast<unsigned long long>(k.cross_level_off_boundary), population_ok ? "constant" : "CHANGED");
  return {pass, buf};
}

Outcome quiescent_round_trip() {
  ScenarioConfig c = smart_market();
  c.total_coarse_steps = 200;
  c.radio_enabled = false;
  c.n_lps = 4;
  for (auto& region : c.regions) region.schedule = {{40, 120}};
  const RunResult refined = run_simulation(c);
  c.multilevel_enabled = false;
  const RunResult flat = run_simulation(c);
  const bool pass = refined.metrics.refines == 3 && refined.metrics.coarsens == 3 && refined.digest == flat.digest;
  char buf[160];
  std::snprintf(buf, sizeof buf, "refines %llu coarsens %llu digest %s",
                static_cast<unsigned long long>(refined.metrics.refines),
                static_cast<unsigned long long>(refined.metrics.coarsens),
                refined.digest == flat.digest ? "equal" : "DIFFERENT");
  return {pass, buf};
}

Outcome migration_benefit() {
  bool pass = true;
  std::string detail;
  for (std::uint64_t seed : {1, 2, 3}) {
    ScenarioConfig c = load_scenario(std::filesystem::path(IOTSIM_SCENARIO_DIR) / "clustered.cfg");
    c.seed = seed;
    c.migration_enabled = false;
    const double off = run_simulation(c).metrics.mean_remote_fraction(200, 300);
    c.migration_enabled = true;
    const double on = run_simulation(c).metrics.mean_remote_fraction(200, 300);
    pass = pass && on < off;
    char buf[120];
    std::snprintf(buf, sizeof buf, "seed %llu off %.4f on %.4f ratio %.3f; ", static_cast<unsigned long long>(seed),
                  off, on, off > 0 ? on / off : 0.0);
    detail += buf;
  }
  return {pass, detail};
}

// Unit-disk graph oracle: BFS over positions, written without the simulator's
// neighbour index.
std::vector<int> bfs_depths(const std::vector<Vec2>& pos, double range, std::size_t origin) {
  std::vector<int> depth(pos.size(), -1);
  std::queue<std::size_t> q;
  depth[origin] = 0;
  q.push(origin);
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop();
    for (std::size_t v = 0; v < pos.size(); ++v) {
      if (depth[v] >= 0) continue;
      const double dx = pos[u].x - pos[v].x, dy = pos[u].y - pos[v].y;
      if (dx * dx + dy * dy <= range * range) {
        depth[v] = depth[u] + 1;
        q.push(v);
      }
    }
  }
  return depth;
}

Outcome epidemic_equivalence() {
  ScenarioConfig c;
  c.width = 500;
  c.height = 500;
  c.producers = 1;
  c.relays = 199;
  c.mobility = "static";
  c.radio_range = 60;
  c.ttl = 0;
  c.seen_capacity = 4096;
  c.advert_probability = 1.0;
  c.chat_probability = 0.0;
  c.publish_probability = 0.0;
  c.subscription_churn = 0.0;
  c.total_coarse_steps = 40;
  c.trace = TraceVerbosity::Full;
  c.n_lps = 4;
  c.multilevel_enabled = true;
  RegionConfig region;
  region.bounds = {0, 0, 500, 500};
  region.market = false;
  region.schedule = {{0, 1000}};
  c.regions = {region};

  // First seed whose graph is connected.
  std::vector<int> depth;
  for (c.seed = 1;; ++c.seed) {
    const SimulationSetup s = build_simulation(c);
    std::vector<Vec2> pos;
    for (const auto& e : s.entities) pos.push_back(e.position);
    depth = bfs_depths(pos, c.radio_range, 0);
    if (std::none_of(depth.begin(), depth.end(), [](int d) { return d < 0; })) break;
  }

  const RunResult r = run_simulation(c);
  const std::uint64_t msg = make_msg_id(0, 0);
  const std::uint64_t ratio = region.ratio;
  std::map<EntityId, std::uint64_t> first;
  std::optional<std::uint64_t> emitted;
  for (const auto& rec : r.runtime.trace) {
    if (rec.kind == EventKind::MoveUpdate && rec.key.dst == 0 && !emitted) {
      emitted = rec.key.time.coarse_step * ratio + rec.key.time.fine_phase;
    }
    if (rec.kind != EventKind::RadioFrame || rec.msg_id != msg || rec.key.dst == 0) continue;
    const std::uint64_t at = rec.key.time.coarse_step * ratio + rec.key.time.fine_phase;
    auto [it, inserted] = first.emplace(rec.key.dst, at);
    if (!inserted) it->second = std::min(it->second, at);
  }
  std::size_t mismatches = 0;
  int max_depth = 0;
  for (EntityId id = 1; id < depth.size(); ++id) {
    max_depth = std::max(max_depth, depth[id]);
    const auto it = first.find(id);
    if (it == first.end() || !emitted || it->second - *emitted != static_cast<std::uint64_t>(depth[id])) ++mismatches;
  }
  const bool pass = emitted && first.size() == depth.size() - 1 && mismatches == 0;
  char buf[200];
  std::snprintf(buf, sizeof buf, "seed %llu receivers %zu/%zu depth mismatches %zu max depth %d",
                static_cast<unsigned long long>(c.seed), first.size(), depth.size() - 1, mismatches, max_depth);
  return {pass, buf};
}

Outcome pubsub_equivalence() {
  struct Live {
    EntityId subscriber;
    Topic topic;
  };
  const std::vector<Rect> zones{{0, 0, 600, 600}, {400, 400, 1000, 1000}, {0, 700, 300, 1000}};
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<EntityId> who(0, 99);
  std::uniform_int_distribution<int> kind(0, 2), zone(-1, 2), product(-1, 7), coin(0, 2);
  std::uniform_real_distribution<double> coord(0.0, 1000.0);
  SubscriptionIndex index{ZoneMap(zones)};
  std::vector<Live> live;
  for (int op = 0; op < 500; ++op) {
    if (coin(gen) == 0 && !live.empty()) {
      const Live victim = live[std::uniform_int_distribution<std::size_t>(0, live.size() - 1)(gen)];
      index.unsubscribe(victim.subscriber, victim.topic);
      std::erase_if(live, [&](const Live& l) { return l.subscriber == victim.subscriber && l.topic == victim.topic; });
    } else {
      Topic t;
      t.kind = static_cast<TopicKind>(kind(gen));
      if (const int z = zone(gen); z >= 0) t.zone = static_cast<ZoneId>(z);
      if (const int p = product(gen); p >= 0) t.product = static_cast<ProductTag>(p);
      const EntityId s = who(gen);
      if (index.subscribe(s, t, SimTime::boundary(0))) live.push_back({s, t});
    }
  }
  int mismatches = 0;
  std::size_t recipients = 0;
  for (int i = 0; i < 50; ++i) {
    Publication pub;
    pub.publisher = who(gen);
    pub.kind = static_cast<TopicKind>(kind(gen));
    if (const int p = product(gen); p >= 0) pub.product = static_cast<ProductTag>(p);
    pub.origin = {coord(gen), coord(gen)};
    pub.time = SimTime::boundary(1);
    std::set<EntityId> expected;
    for (const auto& l : live) {
      if (l.topic.kind != pub.kind) continue;
      if (l.topic.zone && !zones[*l.topic.zone].contains(pub.origin)) continue;
      if (l.topic.product && l.topic.product != pub.product) continue;
      expected.insert(l.subscriber);
    }
    const auto got = publish(pub, index);
    recipients += got.size();
    if (std::vector<EntityId>(expected.begin(), expected.end()) != got) ++mismatches;
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "live subscriptions %zu recipients %zu mismatches %d", live.size(), recipients,
                mismatches);
  return {mismatches == 0 && index.size() == live.size(), buf};
}

Outcome scalability() {
  ScenarioConfig c = smart_market();
  c.width = 10000;
  c.height = 10000;
  c.sensors = 5000;
  c.producers = 2500;
  c.consumers = 30000;
  c.relays = 12500;
  c.total_coarse_steps = 100;
  c.n_lps = 8;
  c.multilevel_enabled = false;
  c.trace = TraceVerbosity::Stats;
  const RunResult r = run_simulation(c);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%llu entities, mean %.3f s/step, max %.3f s/step, wall %.1f s (target < 1 s/step)",
                static_cast<unsigned long long>(c.population()), r.metrics.mean_step_seconds,
                r.metrics.max_step_seconds, r.metrics.wall_seconds);
  return {r.metrics.mean_step_seconds < 1.0, buf};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"sequential equivalence", sequential_equivalence},
      {"barrier safety", barrier_safety},
      {"multilevel semantics", multilevel_semantics},
      {"quiescent round trip", quiescent_round_trip},
      {"migration benefit", migration_benefit},
      {"epidemic oracle equivalence", epidemic_equivalence},
      {"pub-sub oracle equivalence", pubsub_equivalence},
      {"scalability smoke", scalability},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] criterion %zu: %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                seconds_since(t0), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
