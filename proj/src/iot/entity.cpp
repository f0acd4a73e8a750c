#include "iotsim/iot/entity.hpp"

#include <algorithm>

namespace iotsim {

std::string_view to_string(Role r) {
  switch (r) {
    case Role::Sensor: return "sensor";
    case Role::Producer: return "producer";
    case Role::Consumer: return "consumer";
    case Role::Relay: return "relay";
  }
  return "unknown";
}

bool SeenMessages::contains(std::uint64_t msg_id) const {
  return std::find(ids_.begin(), ids_.end(), msg_id) != ids_.end();
}

void SeenMessages::insert(std::uint64_t msg_id) {
  if (capacity_ == 0 || contains(msg_id)) return;
  if (ids_.size() == capacity_) ids_.pop_front();
  ids_.push_back(msg_id);
}

}  // namespace iotsim
