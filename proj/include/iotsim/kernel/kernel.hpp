#pragma once

#include <cstddef>
#include <cstdint>

#include "iotsim/core/errors.hpp"
#include "iotsim/kernel/pending_event_list.hpp"

namespace iotsim {

/// Single-LP time-stepped event core: the clock and the pending-event list.
/// Strictly single-threaded; owned by one logical process.
class Kernel {
 public:
  SimTime now() const { return now_; }
  const PendingEventList& pending() const { return pending_; }
  PendingEventList& pending() { return pending_; }

  /// Inserts `ev`. Outside a step any time >= now is accepted (inbound
  /// deliveries at a barrier). While a step is being processed the event must
  /// lie strictly in the future: zero-delay interactions are forbidden.
  void schedule(Event ev);

  /// Delivers every pending event stamped exactly `step` to `handler`, in key
  /// order, exactly once. Events the handler schedules must be later than
  /// `step`. Returns the number of events delivered.
  template <class Handler>
  std::size_t process_step(SimTime step, Handler&& handler) {
    advance_to(step);
    in_step_ = true;
    std::size_t delivered = 0;
    try {
      while (!pending_.empty() && pending_.top().time == step) {
        Event ev = pending_.pop();
        handler(ev);
        ++delivered;
      }
    } catch (...) {
      in_step_ = false;
      throw;
    }
    in_step_ = false;
    return delivered;
  }

  /// Moves the clock forward to `t`. Fails if an unprocessed event would be
  /// left behind in the past.
  void advance_to(SimTime t);

 private:
  SimTime now_{};
  bool in_step_ = false;
  PendingEventList pending_;
};

}  // namespace iotsim
