#pragma once

#include <cstdint>
#include <vector>

#include "iotsim/harness/digest.hpp"
#include "iotsim/harness/scenario_config.hpp"
#include "iotsim/iot/behavior.hpp"
#include "iotsim/pads/runtime.hpp"

namespace iotsim {

/// Everything needed to start a run, derived deterministically from a config.
struct SimulationSetup {
  std::vector<TerritoryEntity> entities;  // by id
  ReplicatedState replica;
  BehaviorParams behavior;
  MobilityParams mobility;
  PresenceGrid grid;
  RuntimeOptions options;
};

/// Centres of `count` clusters laid out on a near-square grid over the area.
std::vector<Vec2> cluster_centers(const Rect& area, std::uint32_t count);

SimulationSetup build_simulation(const ScenarioConfig& cfg);

struct RunMetrics {
  std::uint64_t events_delivered = 0;
  std::uint64_t local_sends = 0;
  std::uint64_t remote_sends = 0;
  std::uint64_t migrations = 0;
  std::uint64_t forced_migrations = 0;
  std::uint64_t refines = 0;
  std::uint64_t coarsens = 0;
  /// remote / (local + remote) sends per step; 0 for steps without sends.
  std::vector<double> remote_fraction;
  /// Entities hosted across all LPs after each boundary.
  std::vector<std::uint64_t> population;
  double wall_seconds = 0.0;
  double mean_step_seconds = 0.0;
  double max_step_seconds = 0.0;

  /// Mean of remote_fraction over steps [from, to).
  double mean_remote_fraction(std::uint64_t from, std::uint64_t to) const;
};

struct RunResult {
  RunDigest digest;
  RunDigest trace_digest;
  SimTime final_clock;
  RuntimeResult runtime;
  RunMetrics metrics;
};

/// Builds and runs the scenario. Fatal errors propagate as exceptions
/// (SimError subclasses carry the step).
RunResult run_simulation(const ScenarioConfig& cfg);

}  // namespace iotsim
