#include "iotsim/kernel/pending_event_list.hpp"

namespace iotsim {

void PendingEventList::push(Event ev) {
  heap_.push_back(std::move(ev));
  std::push_heap(heap_.begin(), heap_.end(), Greater{});
}

Event PendingEventList::pop() {
  std::pop_heap(heap_.begin(), heap_.end(), Greater{});
  Event ev = std::move(heap_.back());
  heap_.pop_back();
  return ev;
}

std::vector<Event> PendingEventList::sorted() const {
  std::vector<Event> out = heap_;
  std::sort(out.begin(), out.end(), EventKeyLess{});
  return out;
}

}  // namespace iotsim
