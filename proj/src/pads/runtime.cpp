#include "iotsim/pads/runtime.hpp"

#include <algorithm>
#include <limits>
#include <thread>

namespace iotsim {

RuntimeResult run_parallel(std::vector<TerritoryEntity> population, const TerritoryBehavior& behavior,
                           const RuntimeOptions& options, ReplicatedState replica) {
  const std::uint32_t n = options.n_lps;
  if (n == 0) throw SimError("at least one LP is required");
  replica.n_lps = n;
  replica.population = population.size();

  std::vector<std::vector<TerritoryEntity>> hosted(n);
  for (auto& e : population) hosted.at(replica.routing.lp_of(e.id)).push_back(std::move(e));
  population.clear();

  RuntimeShared shared(n);
  std::vector<std::unique_ptr<LogicalProcess>> lps;
  lps.reserve(n);
  for (LpId lp = 0; lp < n; ++lp) {
    lps.push_back(std::make_unique<LogicalProcess>(lp, shared, behavior, options, replica, std::move(hosted[lp])));
  }

  if (n == 1) {
    lps[0]->run();
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(n);
    for (auto& lp : lps) threads.emplace_back([p = lp.get()] { p->run(); });
  }
  if (auto error = shared.error()) std::rethrow_exception(error);

  RuntimeResult out;
  for (const auto& lp : lps) {
    auto ents = lp->entities();
    out.hosted_final.push_back(static_cast<std::uint32_t>(ents.size()));
    std::move(ents.begin(), ents.end(), std::back_inserter(out.entities));
    auto pend = lp->pending_events();
    std::move(pend.begin(), pend.end(), std::back_inserter(out.pending));
    out.stats.insert(out.stats.end(), lp->stats().begin(), lp->stats().end());
    out.trace.insert(out.trace.end(), lp->trace().begin(), lp->trace().end());
    out.audit.push_back(lp->audit());
    out.counters += lp->counters();
  }
  std::sort(out.entities.begin(), out.entities.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  std::sort(out.pending.begin(), out.pending.end(), EventKeyLess{});
  std::sort(out.stats.begin(), out.stats.end(), [](const LpStepStats& a, const LpStepStats& b) {
    return a.step != b.step ? a.step < b.step : a.lp < b.lp;
  });
  std::sort(out.trace.begin(), out.trace.end(),
            [](const TraceRecord& a, const TraceRecord& b) { return a.key < b.key; });
  out.plans = lps[0]->plans();
  out.step_checksums = lps[0]->step_checksums();
  out.replica = lps[0]->replica();
  return out;
}

BarrierAuditReport check_barrier_audit(std::span<const std::vector<AuditEntry>> per_lp) {
  BarrierAuditReport report;
  std::uint64_t steps = std::numeric_limits<std::uint64_t>::max();
  for (const auto& entries : per_lp) {
    if (entries.size() % 3 != 0) ++report.malformed;
    steps = std::min<std::uint64_t>(steps, entries.size() / 3);
    for (std::size_t i = 0; i + 2 < entries.size(); i += 3) {
      const std::uint64_t k = i / 3;
      if (entries[i].kind != AuditKind::StepBegin || entries[i + 1].kind != AuditKind::EosSent ||
          entries[i + 2].kind != AuditKind::EosComplete || entries[i].step != k || entries[i + 1].step != k ||
          entries[i + 2].step != k) {
        ++report.malformed;
        break;
      }
    }
  }
  if (per_lp.empty() || report.malformed > 0) return report;
  for (std::uint64_t k = 0; k + 1 < steps; ++k) {
    std::uint64_t last_eos = 0;
    std::uint64_t first_begin = std::numeric_limits<std::uint64_t>::max();
    for (const auto& entries : per_lp) {
      last_eos = std::max(last_eos, entries[3 * k + 1].seq);
      first_begin = std::min(first_begin, entries[3 * (k + 1)].seq);
    }
    if (first_begin <= last_eos) ++report.overlaps;
    ++report.steps_checked;
  }
  return report;
}

}  // namespace iotsim
