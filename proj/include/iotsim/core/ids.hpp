#pragma once

#include <cstdint>
#include <limits>

namespace iotsim {

using EntityId = std::uint32_t;
using LpId = std::uint32_t;
using RegionId = std::uint32_t;
using ZoneId = std::uint32_t;
using ProductTag = std::uint16_t;

inline constexpr EntityId kNoEntity = std::numeric_limits<EntityId>::max();
inline constexpr LpId kNoLp = std::numeric_limits<LpId>::max();

}  // namespace iotsim
