#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "iotsim/iot/behavior.hpp"
#include "iotsim/kernel/kernel.hpp"
#include "iotsim/multilevel/fine_window.hpp"
#include "iotsim/pads/boundary.hpp"
#include "iotsim/pads/messages.hpp"

namespace iotsim {

struct RuntimeOptions {
  std::uint32_t n_lps = 1;
  std::uint64_t steps = 0;
  std::chrono::milliseconds barrier_timeout{30000};
  /// Upper bound of a random wall-clock delay each LP sleeps before sending
  /// its EOS. Testing aid; never affects simulation results.
  std::uint32_t inject_delay_us = 0;
  bool record_trace = false;
  double radio_range = 50.0;
  /// Radio transmissions per node per fine step; 0 = unlimited.
  std::uint32_t frame_budget = 0;
  PlanParams plan;
};

/// One processed event (or publication) as it appears in the trace.
struct TraceRecord {
  EventKey key;
  EventKind kind = EventKind::Control;
  std::uint8_t src_level = 0;
  std::uint8_t dst_level = 0;
  /// Dissemination message carried by a radio frame.
  std::optional<std::uint64_t> msg_id;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct LpStepStats {
  std::uint64_t step = 0;
  LpId lp = 0;
  std::uint32_t hosted = 0;  // entities hosted after the boundary
  std::uint64_t events_processed = 0;
  std::uint64_t local_sends = 0;
  std::uint64_t remote_sends = 0;
  double barrier_wait_fraction = 0.0;
  std::uint64_t wall_ns = 0;
  std::uint64_t eos_checksum = 0;
};

enum class AuditKind : std::uint8_t { StepBegin, EosSent, EosComplete };

/// Step-stamped barrier audit entry; `seq` comes from a run-wide counter so
/// entries of different LPs can be ordered.
struct AuditEntry {
  std::uint64_t step = 0;
  AuditKind kind = AuditKind::StepBegin;
  std::uint64_t seq = 0;
};

struct LpCounters {
  std::uint64_t events_scheduled = 0;  // emitted or initially scheduled
  std::uint64_t events_delivered = 0;
  std::uint64_t local_sends = 0;
  std::uint64_t remote_sends = 0;
  std::uint64_t cross_level_deliveries = 0;
  std::uint64_t cross_level_off_boundary = 0;
  std::uint64_t late_deliveries = 0;
  std::uint64_t fine_windows = 0;
  std::uint64_t fine_steps = 0;
  std::uint64_t fine_window_violations = 0;
  std::uint64_t frames_dropped = 0;
  std::uint64_t migrated_in = 0;
  std::uint64_t migrated_out = 0;

  LpCounters& operator+=(const LpCounters& o);
};

/// Run-wide plumbing shared by the LP workers: their mailboxes, the abort
/// flag and the first fatal error.
class RuntimeShared {
 public:
  explicit RuntimeShared(std::uint32_t n_lps);

  Mailbox& mailbox(LpId lp) { return *mailboxes_.at(lp); }
  std::uint32_t n_lps() const { return static_cast<std::uint32_t>(mailboxes_.size()); }
  bool aborted() const { return abort_.load(std::memory_order_acquire); }
  void fail(std::exception_ptr error);
  std::exception_ptr error() const;
  std::uint64_t next_audit_seq() { return audit_seq_.fetch_add(1, std::memory_order_acq_rel); }

 private:
  std::vector<std::unique_ptr<Mailbox>> mailboxes_;
  std::atomic<bool> abort_{false};
  mutable std::mutex error_mutex_;
  std::exception_ptr error_;
  std::atomic<std::uint64_t> audit_seq_{0};
};

/// A logical process: a container of simulated entities with its own kernel,
/// driven step by step and synchronised with its peers by an all-to-all EOS
/// exchange. Peers interact only through messages.
class LogicalProcess final : public BehaviorContext {
 public:
  LogicalProcess(LpId id, RuntimeShared& shared, const TerritoryBehavior& behavior, RuntimeOptions options,
                 ReplicatedState replica, std::vector<TerritoryEntity> hosted);

  /// Runs every step; on a fatal error records it in the shared state and
  /// returns.
  void run();

  LpId id() const { return id_; }
  std::vector<TerritoryEntity> entities() const;
  std::vector<Event> pending_events() const { return kernel_.pending().sorted(); }
  const std::vector<LpStepStats>& stats() const { return stats_; }
  const std::vector<TraceRecord>& trace() const { return trace_; }
  const std::vector<AuditEntry>& audit() const { return audit_; }
  const std::vector<BoundaryPlan>& plans() const { return plans_; }
  const std::vector<std::uint64_t>& step_checksums() const { return step_checksums_; }
  const LpCounters& counters() const { return counters_; }
  const ReplicatedState& replica() const { return replica_; }

  // BehaviorContext
  SimTime now() const override { return now_; }
  void send(TerritoryEntity& from, EntityId to, EventKind kind, const Payload& payload) override;
  void broadcast(TerritoryEntity& from, const Payload& payload) override;
  void schedule_tick(TerritoryEntity& e) override;
  void publish(TerritoryEntity& from, const Publication& pub) override;
  void subscription_op(TerritoryEntity& e, SubscriptionOp::Action action, const Topic& topic) override;
  std::span<const EntityId> zone_members(ZoneId cell) const override;
  std::span<const EntityId> radio_neighbors(EntityId id) const override;

 private:
  struct Hosted {
    TerritoryEntity entity;
    InteractionWindow window;
    std::uint64_t last_migrated = kNeverMigrated;
  };

  void boundary(std::uint64_t step);
  void run_step(std::uint64_t step);
  void exchange_eos(std::uint64_t step);
  void dispatch(const Event& ev);
  void route(Event ev);
  Event make_event(TerritoryEntity& from, EntityId to, EventKind kind, const Payload& payload, SimTime time);
  FineWindow* window_of(const TerritoryEntity& e);
  const FineWindow* window_of(EntityId id) const;

  BoundaryReport make_report(std::uint64_t step) const;
  void execute_plan(const BoundaryPlan& plan);
  /// Blocks until `done()` holds, routing every inbound message as it arrives.
  template <class Done>
  void pump(Done&& done, const char* waiting_for, std::uint64_t step);
  void receive(Message&& m);
  void audit(std::uint64_t step, AuditKind kind);

  LpId id_;
  RuntimeShared& shared_;
  const TerritoryBehavior& behavior_;
  RuntimeOptions options_;
  ReplicatedState replica_;
  Kernel kernel_;
  std::unordered_map<EntityId, Hosted> hosted_;

  SimTime now_{};
  std::uint64_t step_ = 0;
  std::vector<FineWindow> windows_;
  std::vector<std::vector<Event>> outbound_;
  std::vector<SubscriptionOp> pending_ops_;
  std::uint64_t step_checksum_ = 0;
  LpStepStats current_{};

  // Inbound bookkeeping.
  std::map<std::uint64_t, std::vector<EosMessage>> eos_;
  std::map<std::uint64_t, std::vector<BoundaryReport>> reports_;
  std::map<std::uint64_t, std::vector<MigrationPayload>> payloads_;

  std::vector<LpStepStats> stats_;
  std::vector<TraceRecord> trace_;
  std::vector<AuditEntry> audit_;
  std::vector<BoundaryPlan> plans_;
  std::vector<std::uint64_t> step_checksums_;
  LpCounters counters_;
};

}  // namespace iotsim
