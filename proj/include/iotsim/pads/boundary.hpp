#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "iotsim/migration/migration.hpp"
#include "iotsim/multilevel/region.hpp"
#include "iotsim/pads/messages.hpp"
#include "iotsim/pads/pubsub.hpp"
#include "iotsim/pads/routing_table.hpp"

namespace iotsim {

inline constexpr std::uint64_t kNeverMigrated = std::numeric_limits<std::uint64_t>::max();

/// State every LP keeps an identical copy of. It changes only at coarse
/// boundaries, through plan_boundary, from the same reports on every LP.
struct ReplicatedState {
  std::uint32_t n_lps = 1;
  std::size_t population = 0;
  RoutingTable routing;
  SubscriptionIndex index;
  std::vector<RefinementRegion> regions;  // parents before children
  std::vector<RegionId> residency;        // by entity id; kNoRegion at level 0
  std::vector<std::uint64_t> last_migrated;

  RegionId region_of(EntityId id) const { return id < residency.size() ? residency[id] : kNoRegion; }
  const RefinementRegion* find_region(RegionId id) const;
};

struct PlanParams {
  MigrationParams migration;
  bool multilevel = false;
};

struct BoundaryPlan {
  std::uint64_t step = 0;
  std::vector<RegionAction> actions;
  std::vector<std::uint32_t> region_counts;
  /// Entities entering (or changing) a refined region at this boundary.
  std::vector<std::pair<EntityId, RegionId>> lifts;
  /// Entities returning to level 0.
  std::vector<EntityId> drops;
  std::vector<MigrationDecision> migrations;
  std::vector<std::uint32_t> hosted_before;
  std::vector<std::uint32_t> hosted_after;
};

/// Deterministic boundary coordinator, run by every LP on the same inputs:
/// applies the step's subscription ops, evaluates refinement triggers,
/// recomputes residency, forces residents of a refined region onto its owner
/// LP, selects affinity migrations under the load guard, and updates the
/// routing table. `reports` must hold one report per LP.
BoundaryPlan plan_boundary(std::uint64_t step, std::span<const BoundaryReport> reports, ReplicatedState& state,
                           const PlanParams& params);

}  // namespace iotsim
