#include "iotsim/multilevel/fine_window.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace iotsim {

FineWindow::FineWindow(RegionId region, std::uint32_t ratio, std::uint64_t coarse_step,
                       std::vector<EntityId> residents, double radio_range)
    : region_(region),
      ratio_(ratio),
      coarse_step_(coarse_step),
      residents_(std::move(residents)),
      radio_range_(radio_range) {
  std::sort(residents_.begin(), residents_.end());
}

bool FineWindow::is_resident(EntityId id) const {
  return std::binary_search(residents_.begin(), residents_.end(), id);
}

void FineWindow::begin_phase(std::uint32_t phase, std::span<const Placed> positions) {
  if (phase != phases_run_ || phase >= ratio_) {
    throw std::logic_error("fine window of region " + std::to_string(region_) + " expected phase " +
                           std::to_string(phases_run_) + ", got " + std::to_string(phase));
  }
  phase_ = phase;
  ++phases_run_;
  topology_ = NeighborIndex(positions, radio_range_);
}

std::vector<Event> FineWindow::close() {
  if (phases_run_ != ratio_) {
    throw std::logic_error("fine window of region " + std::to_string(region_) + " ran " +
                           std::to_string(phases_run_) + " fine steps, expected " + std::to_string(ratio_));
  }
  return std::move(held_);
}

}  // namespace iotsim
