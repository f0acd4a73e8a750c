#include "iotsim/harness/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "iotsim/iot/epidemic.hpp"
#include "iotsim/kernel/rng.hpp"
#include "iotsim/pads/partition.hpp"

namespace iotsim {

namespace {

// Population generation uses its own key so it never overlaps the entities'
// behavior streams.
constexpr std::uint64_t kSetupKey = 0x5e7a9c3b1d2f4e68ULL;

std::vector<ProductTag> distinct_products(CounterRng& rng, std::uint32_t catalog, std::uint32_t count) {
  std::vector<ProductTag> all(catalog);
  std::iota(all.begin(), all.end(), ProductTag{0});
  // Partial Fisher-Yates.
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t j = i + rng.below(catalog - i);
    std::swap(all[i], all[j]);
  }
  all.resize(count);
  std::sort(all.begin(), all.end());
  return all;
}

MobilityKind mobility_kind(const std::string& name) {
  if (name == "clustered") return MobilityKind::Clustered;
  if (name == "static") return MobilityKind::Static;
  return MobilityKind::RandomWaypoint;
}

}  // namespace

std::vector<Vec2> cluster_centers(const Rect& area, std::uint32_t count) {
  std::vector<Vec2> out;
  if (count == 0) return out;
  const auto side = static_cast<std::uint32_t>(std::ceil(std::sqrt(static_cast<double>(count))));
  const std::uint32_t rows = (count + side - 1) / side;
  for (std::uint32_t i = 0; i < count; ++i) {
    const double cx = area.x0 + (static_cast<double>(i % side) + 0.5) * area.width() / side;
    const double cy = area.y0 + (static_cast<double>(i / side) + 0.5) * area.height() / rows;
    out.push_back({cx, cy});
  }
  return out;
}

SimulationSetup build_simulation(const ScenarioConfig& cfg) {
  validate_scenario(cfg);
  SimulationSetup s;
  const Rect area{0.0, 0.0, cfg.width, cfg.height};

  s.mobility.area = area;
  s.mobility.cluster_centers = cluster_centers(area, cfg.cluster_count);
  s.mobility.cluster_sigma = cfg.cluster_sigma;
  s.mobility.cluster_switch_probability = cfg.cluster_switch_probability;
  s.grid = PresenceGrid{area, cfg.presence_grid};

  s.behavior.seed = cfg.seed;
  s.behavior.chat_probability = cfg.chat_probability;
  s.behavior.publish_probability = cfg.publish_probability;
  s.behavior.subscription_churn = cfg.subscription_churn;
  s.behavior.advert_probability = cfg.advert_probability;
  s.behavior.visit_probability = cfg.visit_probability;
  s.behavior.dwell_min = cfg.dwell_min;
  s.behavior.dwell_max = cfg.dwell_max;
  s.behavior.ttl = cfg.ttl == 0 ? kUnlimitedTtl : static_cast<std::uint16_t>(cfg.ttl);
  s.behavior.radio_enabled = cfg.radio_enabled;

  // Markets exist whether or not the multilevel engine is on, so toggling it
  // leaves the generated population unchanged.
  std::vector<Rect> markets;
  for (const auto& r : cfg.regions) {
    if (r.market && !r.parent) markets.push_back(r.bounds);
  }

  const MobilityKind roaming = mobility_kind(cfg.mobility);
  const auto n_markets = static_cast<std::uint32_t>(markets.size());
  EntityId next_id = 0;
  std::uint64_t setup_counter = 0;
  s.entities.reserve(cfg.population());
  auto make = [&](Role role) -> std::pair<TerritoryEntity&, CounterRng> {
    TerritoryEntity& e = s.entities.emplace_back();
    e.id = next_id++;
    e.role = role;
    e.seen = SeenMessages(cfg.seen_capacity);
    setup_counter = 0;
    return {e, CounterRng(cfg.seed ^ kSetupKey, e.id, setup_counter)};
  };
  auto place = [&](TerritoryEntity& e, CounterRng& rng) {
    switch (e.mobility) {
      case MobilityKind::Clustered: {
        e.group = e.id % cfg.cluster_count;
        const Vec2 c = s.mobility.cluster_centers[e.group];
        const double dx = rng.normal() * cfg.cluster_sigma;
        const double dy = rng.normal() * cfg.cluster_sigma;
        e.position = area.clamp({c.x + dx, c.y + dy});
        break;
      }
      case MobilityKind::Market:
        e.position = {rng.uniform(e.home.x0, e.home.x1), rng.uniform(e.home.y0, e.home.y1)};
        break;
      default:
        e.position = {rng.uniform(area.x0, area.x1), rng.uniform(area.y0, area.y1)};
        break;
    }
    e.speed = e.mobility == MobilityKind::Static ? 0.0 : rng.uniform(cfg.speed_min, cfg.speed_max);
  };

  for (std::uint32_t i = 0; i < cfg.sensors; ++i) {
    auto [e, rng] = make(Role::Sensor);
    e.mobility = MobilityKind::Static;
    place(e, rng);
  }
  for (std::uint32_t i = 0; i < cfg.producers; ++i) {
    auto [e, rng] = make(Role::Producer);
    if (n_markets > 0) {
      e.mobility = MobilityKind::Market;
      e.home = markets[i % n_markets];
    } else {
      e.mobility = roaming;
    }
    place(e, rng);
    e.inventory = distinct_products(rng, cfg.catalog_size, cfg.inventory_size);
  }
  for (std::uint32_t i = 0; i < cfg.consumers; ++i) {
    auto [e, rng] = make(Role::Consumer);
    e.mobility = roaming;
    place(e, rng);
    for (ProductTag p : distinct_products(rng, cfg.catalog_size, cfg.interests_per_consumer)) {
      Interest interest{p, std::nullopt, true};
      if (n_markets > 0 && rng.bernoulli(cfg.zoned_interest_probability)) interest.zone = rng.below(n_markets);
      e.interests.push_back(interest);
    }
  }
  for (std::uint32_t i = 0; i < cfg.relays; ++i) {
    auto [e, rng] = make(Role::Relay);
    e.mobility = roaming;
    place(e, rng);
  }
  for (const auto& g : cfg.scripted) {
    for (std::uint32_t i = 0; i < g.count; ++i) {
      auto [e, rng] = make(Role::Relay);
      const Vec2 offset = g.spacing * static_cast<double>(i);
      e.mobility = MobilityKind::Scripted;
      e.position = g.start + offset;
      e.speed = g.speed;
      for (const auto& p : g.route) e.route.push_back(p + offset);
    }
  }
  for (auto& e : s.entities) {
    e.fine_from = e.position;
    e.presence_cell = s.grid.cell_of(e.position);
  }

  // Replicated state.
  auto& rep = s.replica;
  rep.n_lps = cfg.n_lps;
  rep.population = s.entities.size();
  std::vector<EntityDescriptor> desc;
  desc.reserve(s.entities.size());
  for (const auto& e : s.entities) desc.push_back({e.id, e.position});
  rep.routing = partition_entities(desc, cfg.n_lps, cfg.partition, area);
  rep.index = SubscriptionIndex(ZoneMap(markets));
  for (const auto& e : s.entities) {
    rep.index.subscribe(e.id, presence_topic(e.presence_cell), SimTime::boundary(0));
    for (const auto& i : e.interests) {
      if (i.subscribed) rep.index.subscribe(e.id, interest_topic(i), SimTime::boundary(0));
    }
  }
  if (cfg.multilevel_enabled) {
    for (std::size_t i = 0; i < cfg.regions.size(); ++i) {
      const auto& rc = cfg.regions[i];
      RefinementRegion r;
      r.id = static_cast<RegionId>(i);
      r.bounds = rc.bounds;
      r.depth = rc.parent ? 2 : 1;
      if (rc.parent) r.parent = static_cast<RegionId>(*rc.parent);
      r.ratio = rc.ratio;
      r.trigger.theta_hi = rc.theta_hi;
      r.trigger.theta_lo = rc.theta_lo;
      r.trigger.schedule = rc.schedule;
      rep.regions.push_back(std::move(r));
    }
  }
  rep.residency.assign(s.entities.size(), kNoRegion);
  rep.last_migrated.assign(s.entities.size(), kNeverMigrated);

  auto& o = s.options;
  o.n_lps = cfg.n_lps;
  o.steps = cfg.total_coarse_steps;
  o.barrier_timeout = std::chrono::milliseconds(cfg.barrier_timeout_ms);
  o.inject_delay_us = cfg.inject_delay_us;
  o.record_trace = cfg.trace == TraceVerbosity::Full;
  o.radio_range = cfg.radio_range;
  o.frame_budget = cfg.frame_budget;
  o.plan.multilevel = cfg.multilevel_enabled;
  o.plan.migration.enabled = cfg.migration_enabled;
  o.plan.migration.window = cfg.migration_window;
  o.plan.migration.interval = cfg.migration_interval;
  o.plan.migration.alpha = cfg.migration_alpha;
  o.plan.migration.beta = cfg.migration_beta;
  return s;
}

double RunMetrics::mean_remote_fraction(std::uint64_t from, std::uint64_t to) const {
  to = std::min<std::uint64_t>(to, remote_fraction.size());
  if (from >= to) return 0.0;
  double sum = 0.0;
  for (std::uint64_t k = from; k < to; ++k) sum += remote_fraction[k];
  return sum / static_cast<double>(to - from);
}

RunResult run_simulation(const ScenarioConfig& cfg) {
  SimulationSetup setup = build_simulation(cfg);
  const TerritoryBehavior behavior(setup.behavior, setup.mobility, setup.grid);

  const auto t0 = std::chrono::steady_clock::now();
  RunResult out;
  out.runtime = run_parallel(std::move(setup.entities), behavior, setup.options, std::move(setup.replica));
  const auto t1 = std::chrono::steady_clock::now();

  out.final_clock = SimTime::boundary(cfg.total_coarse_steps);
  out.digest = state_digest(out.runtime.entities, out.final_clock, out.runtime.pending);
  out.trace_digest = trace_digest(out.runtime.trace);

  RunMetrics& m = out.metrics;
  const auto& c = out.runtime.counters;
  m.events_delivered = c.events_delivered;
  m.local_sends = c.local_sends;
  m.remote_sends = c.remote_sends;
  for (const auto& plan : out.runtime.plans) {
    for (const auto& mig : plan.migrations) {
      ++m.migrations;
      if (mig.forced) ++m.forced_migrations;
    }
    for (const auto& a : plan.actions) {
      if (a.kind == RegionActionKind::Refine) {
        ++m.refines;
      } else {
        ++m.coarsens;
      }
    }
  }
  const std::uint64_t steps = cfg.total_coarse_steps;
  std::vector<std::uint64_t> local(steps, 0), remote(steps, 0), wall(steps, 0);
  m.population.assign(steps, 0);
  for (const auto& st : out.runtime.stats) {
    local[st.step] += st.local_sends;
    remote[st.step] += st.remote_sends;
    wall[st.step] = std::max(wall[st.step], st.wall_ns);
    m.population[st.step] += st.hosted;
  }
  m.remote_fraction.resize(steps, 0.0);
  for (std::uint64_t k = 0; k < steps; ++k) {
    const std::uint64_t total = local[k] + remote[k];
    m.remote_fraction[k] = total > 0 ? static_cast<double>(remote[k]) / static_cast<double>(total) : 0.0;
  }
  m.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
  m.mean_step_seconds = steps > 0 ? m.wall_seconds / static_cast<double>(steps) : 0.0;
  for (std::uint64_t w : wall) m.max_step_seconds = std::max(m.max_step_seconds, static_cast<double>(w) * 1e-9);
  return out;
}

}  // namespace iotsim
