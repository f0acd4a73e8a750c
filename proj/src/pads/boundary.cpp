#include "iotsim/pads/boundary.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "iotsim/core/errors.hpp"

namespace iotsim {

const RefinementRegion* ReplicatedState::find_region(RegionId id) const {
  for (const auto& r : regions) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

namespace {

void apply_subscription_ops(std::uint64_t step, std::span<const BoundaryReport> reports, ReplicatedState& state) {
  std::vector<SubscriptionOp> ops;
  for (const auto& r : reports) ops.insert(ops.end(), r.ops.begin(), r.ops.end());
  std::sort(ops.begin(), ops.end(), [](const SubscriptionOp& a, const SubscriptionOp& b) {
    if (a.subscriber != b.subscriber) return a.subscriber < b.subscriber;
    return a.seq < b.seq;
  });
  state.index.apply(ops, SimTime::boundary(step));
}

LpId pick_owner(const std::vector<std::uint32_t>& per_lp) {
  LpId best = 0;
  for (LpId lp = 1; lp < per_lp.size(); ++lp) {
    if (per_lp[lp] > per_lp[best]) best = lp;
  }
  return best;
}

}  // namespace

BoundaryPlan plan_boundary(std::uint64_t step, std::span<const BoundaryReport> reports, ReplicatedState& state,
                           const PlanParams& params) {
  if (reports.size() != state.n_lps) {
    throw SimError("boundary " + std::to_string(step) + " has " + std::to_string(reports.size()) +
                       " reports for " + std::to_string(state.n_lps) + " LPs",
                   step);
  }
  BoundaryPlan plan;
  plan.step = step;
  const SimTime at = SimTime::boundary(step);

  std::size_t total = 0;
  for (const auto& r : reports) total += r.hosted_count;
  if (total != state.population) {
    throw PopulationViolation("boundary " + std::to_string(step) + " counts " + std::to_string(total) +
                                  " entities, expected " + std::to_string(state.population),
                              step);
  }

  apply_subscription_ops(step, reports, state);

  // Region populations, overall and per LP.
  const std::size_t n_regions = state.regions.size();
  plan.region_counts.assign(n_regions, 0);
  std::vector<std::vector<std::uint32_t>> per_lp(n_regions, std::vector<std::uint32_t>(state.n_lps, 0));
  std::vector<RegionCandidate> candidates;
  for (const auto& r : reports) {
    for (const auto& c : r.candidates) {
      ++plan.region_counts.at(c.region_index);
      ++per_lp[c.region_index][r.lp];
      candidates.push_back(c);
    }
  }

  std::vector<EntityId> previously;
  for (const auto& region : state.regions) {
    previously.insert(previously.end(), region.residents.begin(), region.residents.end());
  }
  std::sort(previously.begin(), previously.end());

  if (params.multilevel && n_regions > 0) {
    plan.actions = check_refinement_triggers(state.regions, plan.region_counts, at);
    for (const auto& action : plan.actions) {
      for (std::size_t i = 0; i < n_regions; ++i) {
        auto& region = state.regions[i];
        if (region.id != action.region) continue;
        if (action.kind == RegionActionKind::Refine) {
          std::vector<TerritoryEntity*> none;
          refine_region(region, at, none, 0.0);
          const RefinementRegion* parent = region.parent ? state.find_region(*region.parent) : nullptr;
          region.owner = parent ? parent->owner : pick_owner(per_lp[i]);
        } else {
          std::vector<TerritoryEntity*> none;
          coarsen_region(region, at, none);
        }
      }
    }
  }

  // Residency: innermost refined region containing the entity.
  std::map<EntityId, std::uint32_t> new_home;  // entity -> region index
  for (const auto& c : candidates) {
    const auto& region = state.regions[c.region_index];
    if (!region.refined()) continue;
    auto [it, inserted] = new_home.emplace(c.entity, c.region_index);
    if (!inserted && region.depth > state.regions[it->second].depth) it->second = c.region_index;
  }
  for (auto& region : state.regions) region.residents.clear();
  for (EntityId id : previously) {
    if (!new_home.contains(id)) {
      plan.drops.push_back(id);
      state.residency[id] = kNoRegion;
    }
  }
  for (const auto& [id, index] : new_home) {
    auto& region = state.regions[index];
    region.residents.push_back(id);
    if (id >= state.residency.size()) state.residency.resize(static_cast<std::size_t>(id) + 1, kNoRegion);
    if (state.residency[id] != region.id) {
      plan.lifts.emplace_back(id, region.id);
      state.residency[id] = region.id;
    }
  }

  plan.hosted_before = state.routing.hosted_counts(state.n_lps);
  std::vector<std::uint32_t> hosted = plan.hosted_before;

  // Refinement forces co-location of a region's residents on its owner.
  std::vector<EntityId> moving;
  for (const auto& region : state.regions) {
    if (!region.refined()) continue;
    for (EntityId id : region.residents) {
      const LpId host = state.routing.lp_of(id);
      if (host == region.owner) continue;
      plan.migrations.emplace_back(id, host, region.owner, at, 0.0, true);
      --hosted[host];
      ++hosted[region.owner];
      moving.push_back(id);
    }
  }
  std::sort(moving.begin(), moving.end());

  if (params.migration.evaluation_step(step)) {
    std::vector<MigrationProposal> proposals;
    for (const auto& r : reports) proposals.insert(proposals.end(), r.proposals.begin(), r.proposals.end());
    const std::uint32_t hysteresis = params.migration.hysteresis();
    auto eligible = [&](EntityId id) {
      if (state.region_of(id) != kNoRegion) return false;
      if (std::binary_search(moving.begin(), moving.end(), id)) return false;
      const std::uint64_t last = id < state.last_migrated.size() ? state.last_migrated[id] : kNeverMigrated;
      return last == kNeverMigrated || step >= last + hysteresis;
    };
    auto chosen = select_migrations(std::move(proposals), hosted, at, params.migration, eligible);
    plan.migrations.insert(plan.migrations.end(), chosen.begin(), chosen.end());
  }

  for (const auto& m : plan.migrations) {
    state.routing.assign(m.entity, m.to_lp);
    if (m.entity >= state.last_migrated.size()) {
      state.last_migrated.resize(static_cast<std::size_t>(m.entity) + 1, kNeverMigrated);
    }
    state.last_migrated[m.entity] = step;
  }
  if (!plan.migrations.empty()) state.routing.bump_version();
  plan.hosted_after = hosted;
  return plan;
}

}  // namespace iotsim
