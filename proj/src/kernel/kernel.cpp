#include "iotsim/kernel/kernel.hpp"

namespace iotsim {

void Kernel::schedule(Event ev) {
  if (ev.time < now_ || (in_step_ && ev.time == now_)) {
    throw EventInPast("event " + std::string(to_string(ev.kind)) + " from " + std::to_string(ev.src) +
                          " to " + std::to_string(ev.dst) + " stamped " + ev.time.str() +
                          " but clock is at " + now_.str(),
                      now_.coarse_step);
  }
  pending_.push(std::move(ev));
}

void Kernel::advance_to(SimTime t) {
  if (t < now_) {
    throw EventInPast("clock cannot move backwards from " + now_.str() + " to " + t.str(),
                      now_.coarse_step);
  }
  if (!pending_.empty() && pending_.top().time < t) {
    throw EventInPast("unprocessed event stamped " + pending_.top().time.str() +
                          " left behind when advancing to " + t.str(),
                      now_.coarse_step);
  }
  now_ = t;
}

}  // namespace iotsim
