#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "iotsim/core/ids.hpp"

namespace iotsim {

/// Map EntityId -> hosting LP, versioned. Every LP holds a replica; the
/// version is bumped once per applied migration batch and compared at the
/// start of each step.
class RoutingTable {
 public:
  RoutingTable() = default;

  /// Throws UnknownEntity if `id` is not routable.
  LpId lp_of(EntityId id) const;
  bool contains(EntityId id) const { return id < owner_.size() && owner_[id] != kNoLp; }

  void assign(EntityId id, LpId lp);
  void erase(EntityId id);

  std::uint64_t version() const { return version_; }
  void bump_version() { ++version_; }

  std::size_t size() const { return count_; }
  std::vector<std::uint32_t> hosted_counts(std::uint32_t n_lps) const;
  /// Hosted ids of one LP, ascending.
  std::vector<EntityId> hosted_by(LpId lp) const;

 private:
  std::vector<LpId> owner_;
  std::size_t count_ = 0;
  std::uint64_t version_ = 0;
};

}  // namespace iotsim
