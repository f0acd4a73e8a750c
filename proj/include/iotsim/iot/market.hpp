#pragma once

#include "iotsim/iot/entity.hpp"
#include "iotsim/kernel/sim_time.hpp"
#include "iotsim/pads/pubsub.hpp"

namespace iotsim {

/// Builds the availability publication for `product`. Throws NotInInventory
/// when the producer does not hold it.
Publication producer_publish_availability(const TerritoryEntity& producer, ProductTag product, SimTime now);

/// Points the consumer at the producer's current position and keeps the
/// guidance target. Both must be residents of the same refined region,
/// otherwise NotCoLocated.
Vec2 guide_to_producer(TerritoryEntity& consumer, const TerritoryEntity& producer);

}  // namespace iotsim
