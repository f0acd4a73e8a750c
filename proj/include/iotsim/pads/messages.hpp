#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <variant>
#include <vector>

#include "iotsim/core/ids.hpp"
#include "iotsim/iot/entity.hpp"
#include "iotsim/kernel/event.hpp"
#include "iotsim/migration/interaction_stats.hpp"
#include "iotsim/migration/migration.hpp"
#include "iotsim/pads/pubsub.hpp"

namespace iotsim {

/// Events one LP routed to another during a step.
struct EventBatch {
  LpId from = 0;
  std::uint64_t step = 0;
  std::vector<Event> events;
};

/// End-Of-Step. Pure control: sender, step, the sum of the hashes of every
/// event the sender emitted during the step, and its routing-table version.
struct EosMessage {
  LpId sender_lp = 0;
  SimTime step;
  std::uint64_t checksum = 0;
  std::uint64_t routing_version = 0;
};

struct RegionCandidate {
  std::uint32_t region_index = 0;
  EntityId entity = 0;

  friend auto operator<=>(const RegionCandidate&, const RegionCandidate&) = default;
};

/// What an LP contributes to the decisions taken at a coarse boundary.
struct BoundaryReport {
  LpId lp = 0;
  std::uint64_t step = 0;
  std::uint32_t hosted_count = 0;
  std::vector<SubscriptionOp> ops;
  /// Hosted entities lying inside a region's bounds.
  std::vector<RegionCandidate> candidates;
  std::vector<MigrationProposal> proposals;
};

/// Full state of a migrating entity, including the events addressed to it.
struct MigratingEntity {
  TerritoryEntity entity;
  std::vector<Event> pending;
  InteractionWindow window;
  std::uint64_t last_migrated = 0;
};

struct MigrationPayload {
  LpId from = 0;
  std::uint64_t step = 0;
  std::vector<MigratingEntity> entities;
};

using Message = std::variant<EventBatch, EosMessage, BoundaryReport, MigrationPayload>;

/// Ordered point-to-point inbox of one LP. Any number of senders; messages
/// from one sender are received in the order they were posted.
class Mailbox {
 public:
  void post(Message m);
  /// Moves everything queued into `out`, waiting until at least one message is
  /// available. Returns false on timeout or when `abort` is raised.
  template <class Abort>
  bool wait_drain(std::vector<Message>& out, std::chrono::steady_clock::time_point deadline, Abort&& aborted) {
    std::unique_lock lock(mutex_);
    while (queue_.empty()) {
      if (aborted()) return false;
      if (cv_.wait_until(lock, deadline) == std::cv_status::timeout && queue_.empty()) return false;
    }
    for (auto& m : queue_) out.push_back(std::move(m));
    queue_.clear();
    return true;
  }
  void wake();

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<Message> queue_;
};

}  // namespace iotsim
