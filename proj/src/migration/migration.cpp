#include "iotsim/migration/migration.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace iotsim {

MigrationDecision::MigrationDecision(EntityId entity_, LpId from, LpId to, SimTime effective, double affinity_,
                                     bool forced_)
    : entity(entity_), from_lp(from), to_lp(to), effective_step(effective), affinity(affinity_), forced(forced_) {
  if (from == to) {
    throw std::invalid_argument("migration of entity " + std::to_string(entity) + " has from_lp == to_lp");
  }
  if (!effective.on_boundary()) {
    throw std::invalid_argument("migration of entity " + std::to_string(entity) +
                                " must take effect on a coarse boundary");
  }
}

std::optional<MigrationProposal> propose_migration(EntityId entity, LpId current, const InteractionWindow& stats,
                                                   std::uint64_t step, const MigrationParams& params) {
  const auto sends = stats.sends_to_lp(step);
  const std::uint64_t total = std::accumulate(sends.begin(), sends.end(), std::uint64_t{0});
  if (total == 0) return std::nullopt;
  LpId best = current;
  std::uint64_t best_count = 0;
  for (LpId lp = 0; lp < sends.size(); ++lp) {
    if (lp != current && sends[lp] > best_count) {
      best = lp;
      best_count = sends[lp];
    }
  }
  if (best == current) return std::nullopt;
  const double affinity = static_cast<double>(best_count) / static_cast<double>(total);
  if (!(affinity > params.alpha)) return std::nullopt;
  const double local = current < sends.size() ? static_cast<double>(sends[current]) / total : 0.0;
  return MigrationProposal{entity, current, best, affinity, local};
}

namespace {

std::uint32_t spread(const std::vector<std::uint32_t>& hosted) {
  const auto [lo, hi] = std::minmax_element(hosted.begin(), hosted.end());
  return *hi - *lo;
}

}  // namespace

std::vector<MigrationDecision> select_migrations(std::vector<MigrationProposal> proposals,
                                                 std::vector<std::uint32_t>& hosted, SimTime step,
                                                 const MigrationParams& params,
                                                 const std::function<bool(EntityId)>& eligible) {
  std::sort(proposals.begin(), proposals.end(), [](const MigrationProposal& a, const MigrationProposal& b) {
    if (a.affinity != b.affinity) return a.affinity > b.affinity;
    return a.entity < b.entity;
  });
  std::vector<MigrationDecision> out;
  if (hosted.empty()) return out;
  const double mean =
      static_cast<double>(std::accumulate(hosted.begin(), hosted.end(), std::uint64_t{0})) / hosted.size();
  const double bound = params.beta * mean;
  for (const auto& p : proposals) {
    if (p.from_lp == p.to_lp || p.from_lp >= hosted.size() || p.to_lp >= hosted.size()) continue;
    if (eligible && !eligible(p.entity)) continue;
    if (!(p.affinity > p.local_fraction)) continue;
    const std::uint32_t before = spread(hosted);
    --hosted[p.from_lp];
    ++hosted[p.to_lp];
    const std::uint32_t after = spread(hosted);
    if (after <= bound || after <= before) {
      out.emplace_back(p.entity, p.from_lp, p.to_lp, step, p.affinity, false);
    } else {
      ++hosted[p.from_lp];
      --hosted[p.to_lp];
    }
  }
  return out;
}

std::vector<MigrationDecision> evaluate_migrations(std::span<const HostedStats> stats, const RoutingTable& table,
                                                   std::uint32_t n_lps, SimTime step,
                                                   const MigrationParams& params) {
  std::vector<MigrationProposal> proposals;
  for (const auto& s : stats) {
    if (auto p = propose_migration(s.entity, table.lp_of(s.entity), *s.window, step.coarse_step, params)) {
      proposals.push_back(*p);
    }
  }
  auto hosted = table.hosted_counts(n_lps);
  return select_migrations(std::move(proposals), hosted, step, params, {});
}

}  // namespace iotsim
