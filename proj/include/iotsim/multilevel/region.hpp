#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "iotsim/core/geometry.hpp"
#include "iotsim/core/ids.hpp"
#include "iotsim/iot/entity.hpp"
#include "iotsim/kernel/event.hpp"

namespace iotsim {

inline constexpr RegionId kNoRegion = std::numeric_limits<RegionId>::max();

/// Density thresholds with hysteresis (theta_lo < theta_hi), or an explicit
/// schedule of [from, to) coarse-step windows during which the region is
/// refined. A non-empty schedule overrides the thresholds.
struct RegionTrigger {
  std::uint32_t theta_hi = 50;
  std::uint32_t theta_lo = 30;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> schedule;

  bool scheduled() const { return !schedule.empty(); }
  bool schedule_active(std::uint64_t step) const;

  friend bool operator==(const RegionTrigger&, const RegionTrigger&) = default;
};

struct RefinementRegion {
  RegionId id = 0;
  Rect bounds;
  /// Level the region runs at when refined: 1 for a top-level region, 2 for a
  /// region nested in a level-1 region.
  std::uint32_t depth = 1;
  std::optional<RegionId> parent;
  /// Fine steps per enclosing step.
  std::uint32_t ratio = 3;
  RegionTrigger trigger;

  std::uint32_t level = 0;  // 0 while coarse, `depth` while refined
  LpId owner = kNoLp;       // LP running the fine window while refined
  std::uint64_t refined_at = 0;
  std::vector<EntityId> residents;  // ascending

  bool refined() const { return level > 0; }
};

enum class RegionActionKind : std::uint8_t { Refine, Coarsen };

std::string_view to_string(RegionActionKind k);

struct RegionAction {
  RegionId region = 0;
  RegionActionKind kind = RegionActionKind::Refine;
  std::uint32_t resident_count = 0;

  friend bool operator==(const RegionAction&, const RegionAction&) = default;
};

/// Refine/coarsen decisions at a coarse boundary. `counts[i]` is the number
/// of entities inside `regions[i]`. Parents must precede their children. A
/// child can only be refined inside a refined parent and is coarsened with
/// it. Throws MidStepRefinement if `at` is not a coarse boundary.
std::vector<RegionAction> check_refinement_triggers(std::span<const RefinementRegion> regions,
                                                    std::span<const std::uint32_t> counts, SimTime at);

/// Fine steps per coarse step for the region, composing ratios of enclosing
/// regions multiplicatively.
std::uint32_t effective_ratio(const RefinementRegion& region, std::span<const RefinementRegion> all);

/// Switches the region to its fine level at boundary `at` and lifts every
/// given resident. Throws MidStepRefinement off-boundary or when the region
/// is already refined.
void refine_region(RefinementRegion& region, SimTime at, std::span<TerritoryEntity*> residents,
                   double radio_range);

/// Switches the region back to level 0 and drops every given resident.
/// Throws MidStepCoarsening off-boundary or when the region is not refined.
void coarsen_region(RefinementRegion& region, SimTime at, std::span<TerritoryEntity*> residents);

/// Lift: position untouched, radio state initialised with an empty neighbor
/// cache, level and region recorded.
void lift_entity(TerritoryEntity& e, const RefinementRegion& region, double radio_range);

/// Drop: discards radio state; position untouched.
void drop_entity(TerritoryEntity& e);

/// Delivery time for an interaction between entities at different levels:
/// the next coarse boundary strictly after the emission time.
SimTime gate_cross_level_event(const Event& ev, std::uint32_t src_level, std::uint32_t dst_level, SimTime now);

/// Alignment between coarse steps t_k and a region's fine steps t'_j.
/// A region refined at coarse boundary t_s has t'_1 = t_s, so the window from
/// t_k to t_{k+1} consists of fine steps t'_{1+(k-s)R+1} .. t'_{1+(k-s+1)R},
/// the last of which coincides with t_{k+1}.
class LevelClockMap {
 public:
  LevelClockMap(std::uint64_t refined_at, std::uint32_t ratio) : refined_at_(refined_at), ratio_(ratio) {}

  /// Fine index of coarse boundary t_k (k >= refined_at).
  std::uint64_t fine_index_of(std::uint64_t coarse_step) const;
  /// First and last fine index updated during coarse step k -> k+1.
  std::pair<std::uint64_t, std::uint64_t> window(std::uint64_t coarse_step) const;

 private:
  std::uint64_t refined_at_;
  std::uint32_t ratio_;
};

}  // namespace iotsim
