#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "iotsim/core/geometry.hpp"
#include "iotsim/pads/partition.hpp"

namespace iotsim {

enum class TraceVerbosity { Off, Stats, Full };

std::string_view to_string(TraceVerbosity v);
std::optional<TraceVerbosity> parse_trace_verbosity(std::string_view s);

struct RegionConfig {
  Rect bounds;
  std::uint32_t ratio = 3;
  std::uint32_t theta_hi = 50;
  std::uint32_t theta_lo = 30;
  /// Index of the enclosing region in the regions list.
  std::optional<std::uint32_t> parent;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> schedule;
  /// Producers are homed in market regions.
  bool market = true;

  friend bool operator==(const RegionConfig&, const RegionConfig&) = default;
};

/// A group of entities following a fixed route. Entity i of the group starts
/// at start + i*spacing and every route point is shifted by the same offset.
struct ScriptedGroup {
  std::uint32_t count = 0;
  Vec2 start;
  Vec2 spacing;
  std::vector<Vec2> route;
  double speed = 1.0;

  friend bool operator==(const ScriptedGroup&, const ScriptedGroup&) = default;
};

struct ScenarioConfig {
  std::uint64_t seed = 1;
  double width = 1000.0;
  double height = 1000.0;

  std::uint32_t sensors = 0;
  std::uint32_t producers = 0;
  std::uint32_t consumers = 0;
  std::uint32_t relays = 0;
  std::vector<ScriptedGroup> scripted;

  double speed_min = 0.5;
  double speed_max = 2.0;
  std::string mobility = "random_waypoint";  // random_waypoint | clustered | static
  std::uint32_t cluster_count = 4;
  double cluster_sigma = 60.0;
  double cluster_switch_probability = 0.0;
  std::uint32_t presence_grid = 4;

  bool radio_enabled = true;
  double radio_range = 50.0;
  std::uint32_t frame_budget = 0;  // 0 = unlimited
  std::uint32_t ttl = 8;
  std::uint32_t seen_capacity = 64;

  std::uint32_t catalog_size = 20;
  std::uint32_t inventory_size = 3;
  std::uint32_t interests_per_consumer = 2;
  double zoned_interest_probability = 0.5;

  double chat_probability = 0.2;
  double publish_probability = 0.02;
  double subscription_churn = 0.01;
  double advert_probability = 0.05;
  double visit_probability = 0.5;
  std::uint32_t dwell_min = 5;
  std::uint32_t dwell_max = 20;

  std::uint32_t n_lps = 1;
  PartitionStrategy partition = PartitionStrategy::RoundRobin;
  std::uint64_t total_coarse_steps = 100;
  TraceVerbosity trace = TraceVerbosity::Stats;

  bool migration_enabled = false;
  std::uint32_t migration_window = 16;
  std::uint32_t migration_interval = 8;
  double migration_alpha = 0.7;
  double migration_beta = 0.25;

  bool multilevel_enabled = false;
  std::uint32_t max_level = 1;
  std::vector<RegionConfig> regions;

  std::uint32_t barrier_timeout_ms = 30000;
  std::uint32_t inject_delay_us = 0;

  std::uint64_t population() const;
  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Parses a YAML scenario, fills defaults and validates. Unknown keys are
/// rejected. `source` names the input in error messages.
ScenarioConfig parse_scenario(std::string_view text, std::string_view source = "<string>");
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Complete YAML rendering of every key; parse_scenario(serialize_scenario(c)) == c.
std::string serialize_scenario(const ScenarioConfig& cfg);

/// Throws ValidationError naming the first offending key.
void validate_scenario(const ScenarioConfig& cfg);

}  // namespace iotsim
