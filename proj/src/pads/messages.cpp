#include "iotsim/pads/messages.hpp"

namespace iotsim {

void Mailbox::post(Message m) {
  {
    std::lock_guard lock(mutex_);
    queue_.push_back(std::move(m));
  }
  cv_.notify_one();
}

void Mailbox::wake() {
  std::lock_guard lock(mutex_);
  cv_.notify_all();
}

}  // namespace iotsim
