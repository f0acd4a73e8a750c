#include "iotsim/multilevel/region.hpp"

#include <string>

#include "iotsim/core/errors.hpp"

namespace iotsim {

bool RegionTrigger::schedule_active(std::uint64_t step) const {
  for (const auto& [from, to] : schedule) {
    if (step >= from && step < to) return true;
  }
  return false;
}

std::string_view to_string(RegionActionKind k) { return k == RegionActionKind::Refine ? "refine" : "coarsen"; }

std::vector<RegionAction> check_refinement_triggers(std::span<const RefinementRegion> regions,
                                                    std::span<const std::uint32_t> counts, SimTime at) {
  if (!at.on_boundary()) {
    throw MidStepRefinement("refinement triggers evaluated off a coarse boundary at " + at.str(), at.coarse_step);
  }
  std::vector<bool> active_after(regions.size(), false);
  std::vector<RegionAction> actions;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const auto& r = regions[i];
    const std::uint32_t count = counts[i];
    bool parent_ok = true;
    if (r.parent) {
      parent_ok = false;
      for (std::size_t j = 0; j < i; ++j) {
        if (regions[j].id == *r.parent) parent_ok = active_after[j];
      }
    }
    bool want;
    if (r.trigger.scheduled()) {
      want = r.trigger.schedule_active(at.coarse_step);
    } else if (r.refined()) {
      want = count > r.trigger.theta_lo;
    } else {
      want = count >= r.trigger.theta_hi;
    }
    want = want && parent_ok;
    active_after[i] = want;
    if (want && !r.refined()) actions.push_back({r.id, RegionActionKind::Refine, count});
    if (!want && r.refined()) actions.push_back({r.id, RegionActionKind::Coarsen, count});
  }
  return actions;
}

std::uint32_t effective_ratio(const RefinementRegion& region, std::span<const RefinementRegion> all) {
  std::uint32_t ratio = region.ratio;
  std::optional<RegionId> parent = region.parent;
  while (parent) {
    const RefinementRegion* p = nullptr;
    for (const auto& r : all) {
      if (r.id == *parent) p = &r;
    }
    if (!p) break;
    ratio *= p->ratio;
    parent = p->parent;
  }
  return ratio;
}

void lift_entity(TerritoryEntity& e, const RefinementRegion& region, double radio_range) {
  e.level = region.depth;
  e.region = region.id;
  e.radio = RadioState{radio_range, {}, 0, 0};
}

void drop_entity(TerritoryEntity& e) {
  e.level = 0;
  e.region.reset();
  e.radio.reset();
}

void refine_region(RefinementRegion& region, SimTime at, std::span<TerritoryEntity*> residents,
                   double radio_range) {
  if (!at.on_boundary()) {
    throw MidStepRefinement("region " + std::to_string(region.id) + " refined off-boundary at " + at.str(),
                            at.coarse_step);
  }
  if (region.refined()) {
    throw MidStepRefinement("region " + std::to_string(region.id) + " is already refined", at.coarse_step);
  }
  region.level = region.depth;
  region.refined_at = at.coarse_step;
  // Pending events for residents keep their stamps: a level-0 time (k, 0) is
  // already the fine step t'_{1+(k-s)R} of the region's clock.
  for (TerritoryEntity* e : residents) lift_entity(*e, region, radio_range);
}

void coarsen_region(RefinementRegion& region, SimTime at, std::span<TerritoryEntity*> residents) {
  if (!at.on_boundary()) {
    throw MidStepCoarsening("region " + std::to_string(region.id) + " coarsened off-boundary at " + at.str(),
                            at.coarse_step);
  }
  if (!region.refined()) {
    throw MidStepCoarsening("region " + std::to_string(region.id) + " is not refined", at.coarse_step);
  }
  region.level = 0;
  region.owner = kNoLp;
  for (TerritoryEntity* e : residents) drop_entity(*e);
  region.residents.clear();
}

SimTime gate_cross_level_event(const Event& ev, std::uint32_t, std::uint32_t, SimTime now) {
  const SimTime emitted = std::max(ev.time, now);
  return next_boundary(emitted);
}

std::uint64_t LevelClockMap::fine_index_of(std::uint64_t coarse_step) const {
  return 1 + (coarse_step - refined_at_) * ratio_;
}

std::pair<std::uint64_t, std::uint64_t> LevelClockMap::window(std::uint64_t coarse_step) const {
  const std::uint64_t start = fine_index_of(coarse_step);
  return {start + 1, start + ratio_};
}

}  // namespace iotsim
