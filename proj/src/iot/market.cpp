#include "iotsim/iot/market.hpp"

#include <algorithm>
#include <string>

#include "iotsim/core/errors.hpp"

namespace iotsim {

Publication producer_publish_availability(const TerritoryEntity& producer, ProductTag product, SimTime now) {
  if (std::find(producer.inventory.begin(), producer.inventory.end(), product) == producer.inventory.end()) {
    throw NotInInventory("producer " + std::to_string(producer.id) + " does not hold product " +
                             std::to_string(product),
                         now.coarse_step);
  }
  return Publication{producer.id, TopicKind::Product, product, producer.position, now};
}

Vec2 guide_to_producer(TerritoryEntity& consumer, const TerritoryEntity& producer) {
  if (consumer.level == 0 || producer.level == 0 || !consumer.region || consumer.region != producer.region) {
    throw NotCoLocated("consumer " + std::to_string(consumer.id) + " and producer " +
                       std::to_string(producer.id) + " are not in the same refined region");
  }
  consumer.waypoint = producer.position;
  consumer.guidance_target = producer.id;
  return producer.position;
}

}  // namespace iotsim
