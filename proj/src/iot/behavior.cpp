#include "iotsim/iot/behavior.hpp"

#include <algorithm>
#include <cmath>

#include "iotsim/iot/market.hpp"

namespace iotsim {

FrameRecord to_frame(const DisseminationMessage& msg) {
  FrameRecord rec{};
  rec.type = FrameType::Dissemination;
  rec.hop_count = msg.hop_count;
  rec.ttl = msg.ttl;
  rec.topic = msg.topic;
  rec.origin = msg.origin;
  rec.msg_id = msg.msg_id;
  return rec;
}

DisseminationMessage to_message(const FrameRecord& rec) {
  return DisseminationMessage{rec.msg_id, rec.origin, rec.topic, rec.hop_count, rec.ttl};
}

ZoneId PresenceGrid::cell_of(Vec2 p) const {
  const double cw = area.width() / cells_per_side;
  const double ch = area.height() / cells_per_side;
  const auto clampi = [this](double v) {
    return static_cast<std::uint32_t>(std::clamp(v, 0.0, static_cast<double>(cells_per_side - 1)));
  };
  const std::uint32_t cx = clampi(std::floor((p.x - area.x0) / cw));
  const std::uint32_t cy = clampi(std::floor((p.y - area.y0) / ch));
  return cy * cells_per_side + cx;
}

Rect PresenceGrid::cell_rect(ZoneId cell) const {
  const double cw = area.width() / cells_per_side;
  const double ch = area.height() / cells_per_side;
  const std::uint32_t cx = cell % cells_per_side;
  const std::uint32_t cy = cell / cells_per_side;
  return {area.x0 + cx * cw, area.y0 + cy * ch, area.x0 + (cx + 1) * cw, area.y0 + (cy + 1) * ch};
}

void TerritoryBehavior::deliver(TerritoryEntity& e, const Event& ev, BehaviorContext& ctx) const {
  switch (ev.kind) {
    case EventKind::MoveUpdate:
      on_tick(e, ctx);
      break;
    case EventKind::RadioFrame:
      on_frame(e, ev, ctx);
      break;
    case EventKind::Notification:
      on_notification(e, ev, ctx);
      break;
    case EventKind::Publication:
    case EventKind::Control:
      break;
  }
}

void TerritoryBehavior::chat(TerritoryEntity& e, CounterRng& rng, BehaviorContext& ctx) const {
  const auto peers = ctx.zone_members(e.presence_cell);
  const bool self_listed = std::binary_search(peers.begin(), peers.end(), e.id);
  const auto n = static_cast<std::uint32_t>(peers.size() - (self_listed ? 1 : 0));
  if (n == 0) return;
  std::uint32_t pick = rng.below(n);
  if (self_listed) {
    const auto self_pos = static_cast<std::uint32_t>(std::lower_bound(peers.begin(), peers.end(), e.id) - peers.begin());
    if (pick >= self_pos) ++pick;
  }
  FrameRecord rec{};
  rec.type = FrameType::Chat;
  rec.origin = e.id;
  ++e.counters.chats_sent;
  ctx.send(e, peers[pick], EventKind::RadioFrame, Payload::pack(rec));
}

void TerritoryBehavior::on_tick(TerritoryEntity& e, BehaviorContext& ctx) const {
  CounterRng rng(params_.seed, e.id, e.rng_counter);

  e.fine_from = e.position;
  if (e.dwell > 0) {
    --e.dwell;
  } else {
    const MoveResult moved = move_entity_coarse(e, mobility_, rng);
    if (moved.arrived && e.guidance_target) {
      e.guidance_target.reset();
      const std::uint32_t span = params_.dwell_max - params_.dwell_min + 1;
      e.dwell = params_.dwell_min + rng.below(span);
    }
  }

  const ZoneId cell = grid_.cell_of(e.position);
  if (cell != e.presence_cell) {
    ctx.subscription_op(e, SubscriptionOp::Action::Unsubscribe, presence_topic(e.presence_cell));
    ctx.subscription_op(e, SubscriptionOp::Action::Subscribe, presence_topic(cell));
    e.presence_cell = cell;
  }

  if (rng.bernoulli(params_.chat_probability)) chat(e, rng, ctx);

  switch (e.role) {
    case Role::Producer:
      if (!e.inventory.empty() && rng.bernoulli(params_.publish_probability)) {
        const ProductTag product = e.inventory[rng.below(static_cast<std::uint32_t>(e.inventory.size()))];
        ++e.counters.publications;
        ctx.publish(e, producer_publish_availability(e, product, ctx.now()));
      }
      if (e.level > 0 && params_.radio_enabled && !e.inventory.empty() &&
          rng.bernoulli(params_.advert_probability)) {
        DisseminationMessage msg;
        msg.msg_id = make_msg_id(e.id, e.next_msg++);
        msg.origin = e.id;
        msg.topic = e.inventory[rng.below(static_cast<std::uint32_t>(e.inventory.size()))];
        msg.ttl = params_.ttl;
        ++e.counters.adverts;
        const RelayOutcome out = epidemic_relay(e, msg, ctx.radio_neighbors(e.id));
        if (!out.forwards.empty()) ctx.broadcast(e, Payload::pack(to_frame(out.forwards.front().msg)));
      }
      break;
    case Role::Consumer:
      if (!e.interests.empty() && rng.bernoulli(params_.subscription_churn)) {
        Interest& interest = e.interests[rng.below(static_cast<std::uint32_t>(e.interests.size()))];
        ctx.subscription_op(e,
                            interest.subscribed ? SubscriptionOp::Action::Unsubscribe
                                                : SubscriptionOp::Action::Subscribe,
                            interest_topic(interest));
        interest.subscribed = !interest.subscribed;
      }
      break;
    case Role::Sensor:
    case Role::Relay:
      break;
  }

  ctx.schedule_tick(e);
}

void TerritoryBehavior::on_frame(TerritoryEntity& e, const Event& ev, BehaviorContext& ctx) const {
  const auto rec = ev.payload.unpack<FrameRecord>();
  ++e.counters.frames_received;
  if (rec.type == FrameType::Chat) {
    ++e.counters.chats_received;
    return;
  }
  // A frame still in flight when its region coarsened arrives at level 0: it
  // is recorded but there is no radio left to relay it.
  const auto neighbors = e.level > 0 ? ctx.radio_neighbors(e.id) : std::span<const EntityId>{};
  const RelayOutcome out = epidemic_relay(e, to_message(rec), neighbors);
  if (!out.forwards.empty()) {
    ++e.counters.frames_forwarded;
    ctx.broadcast(e, Payload::pack(to_frame(out.forwards.front().msg)));
  }
}

void TerritoryBehavior::on_notification(TerritoryEntity& e, const Event& ev, BehaviorContext&) const {
  ++e.counters.notifications_received;
  if (e.role != Role::Consumer || e.dwell > 0 || e.guidance_target) return;
  if (e.mobility == MobilityKind::Static || e.mobility == MobilityKind::Scripted) return;
  CounterRng rng(params_.seed, e.id, e.rng_counter);
  if (!rng.bernoulli(params_.visit_probability)) return;
  const auto rec = ev.payload.unpack<NotificationRecord>();
  e.waypoint = mobility_.area.clamp({rec.x, rec.y});
  e.guidance_target = rec.producer;
}

}  // namespace iotsim
