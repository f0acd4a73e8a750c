#include "iotsim/harness/scenario_config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "iotsim/core/errors.hpp"

namespace iotsim {

std::string_view to_string(TraceVerbosity v) {
  switch (v) {
    case TraceVerbosity::Off:
      return "off";
    case TraceVerbosity::Stats:
      return "stats";
    case TraceVerbosity::Full:
      return "full";
  }
  return "?";
}

std::optional<TraceVerbosity> parse_trace_verbosity(std::string_view s) {
  if (s == "off") return TraceVerbosity::Off;
  if (s == "stats") return TraceVerbosity::Stats;
  if (s == "full") return TraceVerbosity::Full;
  return std::nullopt;
}

std::uint64_t ScenarioConfig::population() const {
  std::uint64_t n = std::uint64_t{sensors} + producers + consumers + relays;
  for (const auto& g : scripted) n += g.count;
  return n;
}

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const YAML::Node& node, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) throw ParseError(where.empty() ? "<root>" : where, "expected a mapping");
  const std::set<std::string> known(allowed.begin(), allowed.end());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!known.contains(key)) throw ParseError(join(where, key), "unknown key");
  }
}

template <class T>
void read(const YAML::Node& node, const char* key, const std::string& where, T& out) {
  const YAML::Node v = node[key];
  if (!v) return;
  try {
    out = v.as<T>();
  } catch (const YAML::Exception&) {
    throw ParseError(join(where, key), "invalid value '" + YAML::Dump(v) + "'");
  }
}

Vec2 read_point(const YAML::Node& v, const std::string& key) {
  if (!v.IsSequence() || v.size() != 2) throw ParseError(key, "expected [x, y]");
  try {
    return {v[0].as<double>(), v[1].as<double>()};
  } catch (const YAML::Exception&) {
    throw ParseError(key, "expected [x, y]");
  }
}

Rect read_rect(const YAML::Node& v, const std::string& key) {
  if (!v.IsSequence() || v.size() != 4) throw ParseError(key, "expected [x0, y0, x1, y1]");
  try {
    return {v[0].as<double>(), v[1].as<double>(), v[2].as<double>(), v[3].as<double>()};
  } catch (const YAML::Exception&) {
    throw ParseError(key, "expected [x0, y0, x1, y1]");
  }
}

void parse_into(const YAML::Node& root, ScenarioConfig& c) {
  reject_unknown(root, "",
                 {"seed", "area", "population", "scripted", "speed", "mobility", "clusters", "presence_grid",
                  "radio", "ttl", "seen_capacity", "market", "behavior", "n_lps", "partition",
                  "total_coarse_steps", "trace", "migration", "multilevel", "runtime"});
  read(root, "seed", "", c.seed);
  if (auto n = root["area"]) {
    reject_unknown(n, "area", {"width", "height"});
    read(n, "width", "area", c.width);
    read(n, "height", "area", c.height);
  }
  if (auto n = root["population"]) {
    reject_unknown(n, "population", {"sensors", "producers", "consumers", "relays"});
    read(n, "sensors", "population", c.sensors);
    read(n, "producers", "population", c.producers);
    read(n, "consumers", "population", c.consumers);
    read(n, "relays", "population", c.relays);
  }
  if (auto n = root["scripted"]) {
    if (!n.IsSequence()) throw ParseError("scripted", "expected a list");
    for (std::size_t i = 0; i < n.size(); ++i) {
      const std::string where = "scripted[" + std::to_string(i) + "]";
      const YAML::Node g = n[i];
      reject_unknown(g, where, {"count", "start", "spacing", "route", "speed"});
      ScriptedGroup group;
      read(g, "count", where, group.count);
      read(g, "speed", where, group.speed);
      if (g["start"]) group.start = read_point(g["start"], where + ".start");
      if (g["spacing"]) group.spacing = read_point(g["spacing"], where + ".spacing");
      if (auto r = g["route"]) {
        if (!r.IsSequence()) throw ParseError(where + ".route", "expected a list of points");
        for (std::size_t j = 0; j < r.size(); ++j) {
          group.route.push_back(read_point(r[j], where + ".route[" + std::to_string(j) + "]"));
        }
      }
      c.scripted.push_back(std::move(group));
    }
  }
  if (auto n = root["speed"]) {
    reject_unknown(n, "speed", {"min", "max"});
    read(n, "min", "speed", c.speed_min);
    read(n, "max", "speed", c.speed_max);
  }
  read(root, "mobility", "", c.mobility);
  if (auto n = root["clusters"]) {
    reject_unknown(n, "clusters", {"count", "sigma", "switch_probability"});
    read(n, "count", "clusters", c.cluster_count);
    read(n, "sigma", "clusters", c.cluster_sigma);
    read(n, "switch_probability", "clusters", c.cluster_switch_probability);
  }
  read(root, "presence_grid", "", c.presence_grid);
  if (auto n = root["radio"]) {
    reject_unknown(n, "radio", {"enabled", "range", "frame_budget"});
    read(n, "enabled", "radio", c.radio_enabled);
    read(n, "range", "radio", c.radio_range);
    read(n, "frame_budget", "radio", c.frame_budget);
  }
  read(root, "ttl", "", c.ttl);
  read(root, "seen_capacity", "", c.seen_capacity);
  if (auto n = root["market"]) {
    reject_unknown(n, "market",
                   {"catalog_size", "inventory_size", "interests_per_consumer", "zoned_interest_probability"});
    read(n, "catalog_size", "market", c.catalog_size);
    read(n, "inventory_size", "market", c.inventory_size);
    read(n, "interests_per_consumer", "market", c.interests_per_consumer);
    read(n, "zoned_interest_probability", "market", c.zoned_interest_probability);
  }
  if (auto n = root["behavior"]) {
    reject_unknown(n, "behavior",
                   {"chat_probability", "publish_probability", "subscription_churn", "advert_probability",
                    "visit_probability", "dwell_min", "dwell_max"});
    read(n, "chat_probability", "behavior", c.chat_probability);
    read(n, "publish_probability", "behavior", c.publish_probability);
    read(n, "subscription_churn", "behavior", c.subscription_churn);
    read(n, "advert_probability", "behavior", c.advert_probability);
    read(n, "visit_probability", "behavior", c.visit_probability);
    read(n, "dwell_min", "behavior", c.dwell_min);
    read(n, "dwell_max", "behavior", c.dwell_max);
  }
  read(root, "n_lps", "", c.n_lps);
  if (auto n = root["partition"]) {
    const auto s = n.as<std::string>();
    if (s == "round_robin") {
      c.partition = PartitionStrategy::RoundRobin;
    } else if (s == "spatial_grid") {
      c.partition = PartitionStrategy::SpatialGrid;
    } else {
      throw ParseError("partition", "expected round_robin or spatial_grid, got '" + s + "'");
    }
  }
  read(root, "total_coarse_steps", "", c.total_coarse_steps);
  if (auto n = root["trace"]) {
    const auto s = n.as<std::string>();
    const auto v = parse_trace_verbosity(s);
    if (!v) throw ParseError("trace", "expected full, stats or off, got '" + s + "'");
    c.trace = *v;
  }
  if (auto n = root["migration"]) {
    reject_unknown(n, "migration", {"enabled", "window", "interval", "alpha", "beta"});
    read(n, "enabled", "migration", c.migration_enabled);
    read(n, "window", "migration", c.migration_window);
    read(n, "interval", "migration", c.migration_interval);
    read(n, "alpha", "migration", c.migration_alpha);
    read(n, "beta", "migration", c.migration_beta);
  }
  if (auto n = root["multilevel"]) {
    reject_unknown(n, "multilevel", {"enabled", "max_level", "regions"});
    read(n, "enabled", "multilevel", c.multilevel_enabled);
    read(n, "max_level", "multilevel", c.max_level);
    if (auto rs = n["regions"]) {
      if (!rs.IsSequence()) throw ParseError("multilevel.regions", "expected a list");
      for (std::size_t i = 0; i < rs.size(); ++i) {
        const std::string where = "multilevel.regions[" + std::to_string(i) + "]";
        const YAML::Node r = rs[i];
        reject_unknown(r, where, {"bounds", "ratio", "theta_hi", "theta_lo", "parent", "schedule", "market"});
        RegionConfig region;
        if (!r["bounds"]) throw ParseError(where + ".bounds", "missing");
        region.bounds = read_rect(r["bounds"], where + ".bounds");
        read(r, "ratio", where, region.ratio);
        read(r, "theta_hi", where, region.theta_hi);
        read(r, "theta_lo", where, region.theta_lo);
        read(r, "market", where, region.market);
        if (r["parent"]) {
          std::uint32_t p = 0;
          read(r, "parent", where, p);
          region.parent = p;
        }
        if (auto s = r["schedule"]) {
          if (!s.IsSequence()) throw ParseError(where + ".schedule", "expected a list of [from, to]");
          for (std::size_t j = 0; j < s.size(); ++j) {
            const auto key = where + ".schedule[" + std::to_string(j) + "]";
            if (!s[j].IsSequence() || s[j].size() != 2) throw ParseError(key, "expected [from, to]");
            try {
              region.schedule.emplace_back(s[j][0].as<std::uint64_t>(), s[j][1].as<std::uint64_t>());
            } catch (const YAML::Exception&) {
              throw ParseError(key, "expected [from, to]");
            }
          }
        }
        c.regions.push_back(std::move(region));
      }
    }
  }
  if (auto n = root["runtime"]) {
    reject_unknown(n, "runtime", {"barrier_timeout_ms", "inject_delay_us"});
    read(n, "barrier_timeout_ms", "runtime", c.barrier_timeout_ms);
    read(n, "inject_delay_us", "runtime", c.inject_delay_us);
  }
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ValidationError(key, what);
}

void require_probability(double p, const std::string& key) { require(p >= 0.0 && p <= 1.0, key, "must lie in [0, 1]"); }

}  // namespace

void validate_scenario(const ScenarioConfig& c) {
  require(c.width > 0.0, "area.width", "must be positive");
  require(c.height > 0.0, "area.height", "must be positive");
  require(c.population() < (1ULL << 31), "population", "too many entities");
  const Rect area{0.0, 0.0, c.width, c.height};
  for (std::size_t i = 0; i < c.scripted.size(); ++i) {
    const auto& g = c.scripted[i];
    const std::string where = "scripted[" + std::to_string(i) + "]";
    require(g.speed >= 0.0, where + ".speed", "must be non-negative");
    if (g.count == 0) continue;
    // Groups are straight lines, so checking both ends covers every member.
    for (const std::uint32_t k : {0U, g.count - 1}) {
      const Vec2 offset = g.spacing * static_cast<double>(k);
      require(area.contains(g.start + offset), where + ".start", "places entities outside the area");
      for (const auto& p : g.route) require(area.contains(p + offset), where + ".route", "leaves the area");
    }
  }
  require(c.speed_min >= 0.0, "speed.min", "must be non-negative");
  require(c.speed_max >= c.speed_min, "speed.max", "must be at least speed.min");
  require(c.mobility == "random_waypoint" || c.mobility == "clustered" || c.mobility == "static", "mobility",
          "expected random_waypoint, clustered or static");
  require(c.cluster_count >= 1, "clusters.count", "must be at least 1");
  require(c.cluster_sigma > 0.0, "clusters.sigma", "must be positive");
  require_probability(c.cluster_switch_probability, "clusters.switch_probability");
  require(c.presence_grid >= 1 && c.presence_grid <= 1024, "presence_grid", "must lie in [1, 1024]");
  require(c.radio_range > 0.0, "radio.range", "must be positive");
  require(c.ttl <= 65534, "ttl", "must be at most 65534 (0 = unlimited)");
  require(c.seen_capacity >= 1, "seen_capacity", "must be at least 1");
  require(c.catalog_size >= 1 && c.catalog_size <= 65535, "market.catalog_size", "must lie in [1, 65535]");
  require(c.inventory_size <= c.catalog_size, "market.inventory_size", "exceeds market.catalog_size");
  require(c.interests_per_consumer <= c.catalog_size, "market.interests_per_consumer",
          "exceeds market.catalog_size");
  require_probability(c.zoned_interest_probability, "market.zoned_interest_probability");
  require_probability(c.chat_probability, "behavior.chat_probability");
  require_probability(c.publish_probability, "behavior.publish_probability");
  require_probability(c.subscription_churn, "behavior.subscription_churn");
  require_probability(c.advert_probability, "behavior.advert_probability");
  require_probability(c.visit_probability, "behavior.visit_probability");
  require(c.dwell_max >= c.dwell_min, "behavior.dwell_max", "must be at least behavior.dwell_min");
  require(c.n_lps >= 1 && c.n_lps <= 256, "n_lps", "must lie in [1, 256]");
  require(c.total_coarse_steps >= 1, "total_coarse_steps", "must be positive");
  require(c.migration_window >= 1, "migration.window", "must be positive");
  require(c.migration_interval >= 1, "migration.interval", "must be positive");
  require(c.migration_alpha > 0.0 && c.migration_alpha <= 1.0, "migration.alpha", "must lie in (0, 1]");
  require(c.migration_beta >= 0.0, "migration.beta", "must be non-negative");
  require(c.max_level >= 1 && c.max_level <= 2, "multilevel.max_level", "must be 1 or 2");
  for (std::size_t i = 0; i < c.regions.size(); ++i) {
    const auto& r = c.regions[i];
    const std::string where = "multilevel.regions[" + std::to_string(i) + "]";
    require(r.bounds.x0 < r.bounds.x1 && r.bounds.y0 < r.bounds.y1, where + ".bounds", "must be a non-empty rectangle");
    require(area.contains(r.bounds), where + ".bounds", "must lie inside the area");
    require(r.ratio >= 1 && r.ratio <= 64, where + ".ratio", "must lie in [1, 64]");
    require(r.theta_lo < r.theta_hi, where + ".theta_lo",
            "hysteresis rule violated: theta_lo must be strictly below theta_hi");
    for (std::size_t j = 0; j < r.schedule.size(); ++j) {
      require(r.schedule[j].first < r.schedule[j].second, where + ".schedule[" + std::to_string(j) + "]",
              "from must be below to");
    }
    if (r.parent) {
      require(*r.parent < i, where + ".parent", "must name an earlier region");
      const auto& p = c.regions[*r.parent];
      require(!p.parent, where + ".parent", "nesting deeper than two levels is not supported");
      require(c.max_level >= 2, where + ".parent", "nested regions need multilevel.max_level 2");
      require(p.bounds.contains(r.bounds), where + ".bounds", "must lie inside the parent region");
    }
  }
  require(c.barrier_timeout_ms >= 1, "runtime.barrier_timeout_ms", "must be positive");
}

ScenarioConfig parse_scenario(std::string_view text, std::string_view source) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ParseError(std::string(source), e.what());
  }
  ScenarioConfig cfg;
  if (!root.IsNull()) {
    try {
      parse_into(root, cfg);
    } catch (const YAML::Exception& e) {
      throw ParseError(std::string(source), e.what());
    }
  }
  validate_scenario(cfg);
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

namespace {

void emit_point(YAML::Emitter& out, Vec2 p) { out << YAML::Flow << YAML::BeginSeq << p.x << p.y << YAML::EndSeq; }

}  // namespace

std::string serialize_scenario(const ScenarioConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "seed" << YAML::Value << c.seed;
  out << YAML::Key << "area" << YAML::Value << YAML::BeginMap << YAML::Key << "width" << YAML::Value << c.width
      << YAML::Key << "height" << YAML::Value << c.height << YAML::EndMap;
  out << YAML::Key << "population" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "sensors" << YAML::Value << c.sensors;
  out << YAML::Key << "producers" << YAML::Value << c.producers;
  out << YAML::Key << "consumers" << YAML::Value << c.consumers;
  out << YAML::Key << "relays" << YAML::Value << c.relays;
  out << YAML::EndMap;
  out << YAML::Key << "scripted" << YAML::Value << YAML::BeginSeq;
  for (const auto& g : c.scripted) {
    out << YAML::BeginMap;
    out << YAML::Key << "count" << YAML::Value << g.count;
    out << YAML::Key << "start" << YAML::Value;
    emit_point(out, g.start);
    out << YAML::Key << "spacing" << YAML::Value;
    emit_point(out, g.spacing);
    out << YAML::Key << "route" << YAML::Value << YAML::BeginSeq;
    for (const auto& p : g.route) emit_point(out, p);
    out << YAML::EndSeq;
    out << YAML::Key << "speed" << YAML::Value << g.speed;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "speed" << YAML::Value << YAML::BeginMap << YAML::Key << "min" << YAML::Value << c.speed_min
      << YAML::Key << "max" << YAML::Value << c.speed_max << YAML::EndMap;
  out << YAML::Key << "mobility" << YAML::Value << c.mobility;
  out << YAML::Key << "clusters" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "count" << YAML::Value << c.cluster_count;
  out << YAML::Key << "sigma" << YAML::Value << c.cluster_sigma;
  out << YAML::Key << "switch_probability" << YAML::Value << c.cluster_switch_probability;
  out << YAML::EndMap;
  out << YAML::Key << "presence_grid" << YAML::Value << c.presence_grid;
  out << YAML::Key << "radio" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "enabled" << YAML::Value << c.radio_enabled;
  out << YAML::Key << "range" << YAML::Value << c.radio_range;
  out << YAML::Key << "frame_budget" << YAML::Value << c.frame_budget;
  out << YAML::EndMap;
  out << YAML::Key << "ttl" << YAML::Value << c.ttl;
  out << YAML::Key << "seen_capacity" << YAML::Value << c.seen_capacity;
  out << YAML::Key << "market" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "catalog_size" << YAML::Value << c.catalog_size;
  out << YAML::Key << "inventory_size" << YAML::Value << c.inventory_size;
  out << YAML::Key << "interests_per_consumer" << YAML::Value << c.interests_per_consumer;
  out << YAML::Key << "zoned_interest_probability" << YAML::Value << c.zoned_interest_probability;
  out << YAML::EndMap;
  out << YAML::Key << "behavior" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "chat_probability" << YAML::Value << c.chat_probability;
  out << YAML::Key << "publish_probability" << YAML::Value << c.publish_probability;
  out << YAML::Key << "subscription_churn" << YAML::Value << c.subscription_churn;
  out << YAML::Key << "advert_probability" << YAML::Value << c.advert_probability;
  out << YAML::Key << "visit_probability" << YAML::Value << c.visit_probability;
  out << YAML::Key << "dwell_min" << YAML::Value << c.dwell_min;
  out << YAML::Key << "dwell_max" << YAML::Value << c.dwell_max;
  out << YAML::EndMap;
  out << YAML::Key << "n_lps" << YAML::Value << c.n_lps;
  out << YAML::Key << "partition" << YAML::Value << std::string(to_string(c.partition));
  out << YAML::Key << "total_coarse_steps" << YAML::Value << c.total_coarse_steps;
  out << YAML::Key << "trace" << YAML::Value << std::string(to_string(c.trace));
  out << YAML::Key << "migration" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "enabled" << YAML::Value << c.migration_enabled;
  out << YAML::Key << "window" << YAML::Value << c.migration_window;
  out << YAML::Key << "interval" << YAML::Value << c.migration_interval;
  out << YAML::Key << "alpha" << YAML::Value << c.migration_alpha;
  out << YAML::Key << "beta" << YAML::Value << c.migration_beta;
  out << YAML::EndMap;
  out << YAML::Key << "multilevel" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "enabled" << YAML::Value << c.multilevel_enabled;
  out << YAML::Key << "max_level" << YAML::Value << c.max_level;
  out << YAML::Key << "regions" << YAML::Value << YAML::BeginSeq;
  for (const auto& r : c.regions) {
    out << YAML::BeginMap;
    out << YAML::Key << "bounds" << YAML::Value << YAML::Flow << YAML::BeginSeq << r.bounds.x0 << r.bounds.y0
        << r.bounds.x1 << r.bounds.y1 << YAML::EndSeq;
    out << YAML::Key << "ratio" << YAML::Value << r.ratio;
    out << YAML::Key << "theta_hi" << YAML::Value << r.theta_hi;
    out << YAML::Key << "theta_lo" << YAML::Value << r.theta_lo;
    if (r.parent) out << YAML::Key << "parent" << YAML::Value << *r.parent;
    out << YAML::Key << "schedule" << YAML::Value << YAML::BeginSeq;
    for (const auto& [from, to] : r.schedule) {
      out << YAML::Flow << YAML::BeginSeq << from << to << YAML::EndSeq;
    }
    out << YAML::EndSeq;
    out << YAML::Key << "market" << YAML::Value << r.market;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;
  out << YAML::Key << "runtime" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "barrier_timeout_ms" << YAML::Value << c.barrier_timeout_ms;
  out << YAML::Key << "inject_delay_us" << YAML::Value << c.inject_delay_us;
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace iotsim
