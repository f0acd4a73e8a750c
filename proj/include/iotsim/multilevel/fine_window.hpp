#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "iotsim/core/ids.hpp"
#include "iotsim/iot/connectivity.hpp"
#include "iotsim/kernel/event.hpp"

namespace iotsim {

/// One coarse step of a refined region, run inside the LP that owns all of
/// the region's residents. Tracks the fine steps executed, snapshots the
/// unit-disk topology at the start of each fine step, and holds back events
/// addressed outside the region until the window closes.
class FineWindow {
 public:
  FineWindow(RegionId region, std::uint32_t ratio, std::uint64_t coarse_step,
             std::vector<EntityId> residents, double radio_range);

  RegionId region() const { return region_; }
  std::uint32_t ratio() const { return ratio_; }
  std::uint64_t coarse_step() const { return coarse_step_; }
  bool is_resident(EntityId id) const;
  const std::vector<EntityId>& residents() const { return residents_; }

  /// Starts fine step `phase` with the residents' positions at that instant.
  void begin_phase(std::uint32_t phase, std::span<const Placed> positions);
  std::span<const EntityId> neighbors(EntityId id) const { return topology_.neighbors(id); }
  std::uint32_t current_phase() const { return phase_; }
  std::uint32_t phases_run() const { return phases_run_; }

  void hold(Event ev) { held_.push_back(std::move(ev)); }
  /// Closes the window and returns the held cross-level events. Throws
  /// std::logic_error unless exactly `ratio` fine steps ran.
  std::vector<Event> close();

 private:
  RegionId region_;
  std::uint32_t ratio_;
  std::uint64_t coarse_step_;
  std::vector<EntityId> residents_;
  double radio_range_;
  std::uint32_t phase_ = 0;
  std::uint32_t phases_run_ = 0;
  NeighborIndex topology_;
  std::vector<Event> held_;
};

}  // namespace iotsim
