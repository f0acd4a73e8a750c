#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "iotsim/kernel/event.hpp"

namespace iotsim {

/// Ordered multiset of pending events, popped in total-order key order.
/// Binary min-heap on the event key.
class PendingEventList {
 public:
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

  void push(Event ev);
  const Event& top() const { return heap_.front(); }
  Event pop();

  /// Removes and returns every event matching `pred`, in key order.
  template <class Pred>
  std::vector<Event> extract_if(Pred pred) {
    std::vector<Event> out;
    auto keep = std::partition(heap_.begin(), heap_.end(), [&](const Event& e) { return !pred(e); });
    out.assign(std::make_move_iterator(keep), std::make_move_iterator(heap_.end()));
    heap_.erase(keep, heap_.end());
    std::make_heap(heap_.begin(), heap_.end(), Greater{});
    std::sort(out.begin(), out.end(), EventKeyLess{});
    return out;
  }

  /// Copy of the contents in key order.
  std::vector<Event> sorted() const;

 private:
  struct Greater {
    bool operator()(const Event& a, const Event& b) const { return EventKeyLess{}(b, a); }
  };
  std::vector<Event> heap_;
};

}  // namespace iotsim
