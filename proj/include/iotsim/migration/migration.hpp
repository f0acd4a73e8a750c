#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "iotsim/core/ids.hpp"
#include "iotsim/kernel/sim_time.hpp"
#include "iotsim/migration/interaction_stats.hpp"
#include "iotsim/pads/routing_table.hpp"

namespace iotsim {

/// Engineering defaults, all configurable.
struct MigrationParams {
  bool enabled = false;
  std::uint32_t window = 16;    // W, coarse steps of history
  std::uint32_t interval = 8;   // E, evaluate every E coarse steps
  double alpha = 0.7;           // affinity threshold
  double beta = 0.25;           // load deviation guard, fraction of the mean

  /// An entity may not migrate again within this many steps.
  std::uint32_t hysteresis() const { return 2 * window; }
  bool evaluation_step(std::uint64_t step) const { return enabled && step > 0 && step % interval == 0; }
};

struct MigrationDecision {
  MigrationDecision(EntityId entity, LpId from_lp, LpId to_lp, SimTime effective_step, double affinity = 0.0,
                    bool forced = false);

  EntityId entity;
  LpId from_lp;
  LpId to_lp;
  SimTime effective_step;
  double affinity;
  /// Co-location moves ordered by refinement rather than by the heuristic.
  bool forced;

  friend bool operator==(const MigrationDecision&, const MigrationDecision&) = default;
};

struct MigrationProposal {
  EntityId entity = 0;
  LpId from_lp = 0;
  LpId to_lp = 0;
  double affinity = 0.0;        // sends_to_lp[to] / total sends
  double local_fraction = 0.0;  // sends_to_lp[from] / total sends

  friend bool operator==(const MigrationProposal&, const MigrationProposal&) = default;
};

/// Proposes moving the entity to the LP it talks to most, when that LP is not
/// its own and receives more than alpha of its windowed sends. Ties go to the
/// lower LP id.
std::optional<MigrationProposal> propose_migration(EntityId entity, LpId current, const InteractionWindow& stats,
                                                   std::uint64_t step, const MigrationParams& params);

/// Load guard: accepts proposals in (affinity desc, entity asc) order as long
/// as the spread max-min of hosted counts stays within beta*mean, or does not
/// grow if it already exceeded that. `hosted` is updated in place.
/// `eligible` filters out pinned or recently migrated entities.
std::vector<MigrationDecision> select_migrations(std::vector<MigrationProposal> proposals,
                                                 std::vector<std::uint32_t>& hosted, SimTime step,
                                                 const MigrationParams& params,
                                                 const std::function<bool(EntityId)>& eligible);

struct HostedStats {
  EntityId entity = 0;
  const InteractionWindow* window = nullptr;
};

/// Proposal + guard in one call for a complete view of all hosted entities.
std::vector<MigrationDecision> evaluate_migrations(std::span<const HostedStats> stats, const RoutingTable& table,
                                                   std::uint32_t n_lps, SimTime step,
                                                   const MigrationParams& params);

}  // namespace iotsim
