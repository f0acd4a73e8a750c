#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "iotsim/pads/logical_process.hpp"

namespace iotsim {

struct RuntimeResult {
  std::vector<TerritoryEntity> entities;  // by id
  std::vector<Event> pending;             // by event key
  std::vector<LpStepStats> stats;         // by (step, lp)
  std::vector<TraceRecord> trace;         // by event key
  std::vector<BoundaryPlan> plans;        // boundaries with region actions or migrations
  std::vector<std::vector<AuditEntry>> audit;  // per LP
  std::vector<std::uint64_t> step_checksums;   // global, per step
  std::vector<std::uint32_t> hosted_final;     // per LP
  LpCounters counters;
  ReplicatedState replica;  // final replicated state
};

/// Runs `options.steps` coarse steps of the population on `options.n_lps`
/// logical processes, one thread each. `replica.routing` gives the initial
/// placement. Rethrows the first fatal error raised by any LP.
RuntimeResult run_parallel(std::vector<TerritoryEntity> population, const TerritoryBehavior& behavior,
                           const RuntimeOptions& options, ReplicatedState replica);

struct BarrierAuditReport {
  std::uint64_t steps_checked = 0;
  /// Steps k where some LP began k+1 before every LP had sent its EOS for k.
  std::uint64_t overlaps = 0;
  /// LPs whose entry sequence is not StepBegin, EosSent, EosComplete per step.
  std::uint64_t malformed = 0;
};

BarrierAuditReport check_barrier_audit(std::span<const std::vector<AuditEntry>> per_lp);

}  // namespace iotsim
