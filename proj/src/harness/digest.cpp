#include "iotsim/harness/digest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <memory>
#include <stdexcept>

namespace iotsim {

void CanonicalWriter::put(std::uint64_t v, int n) {
  for (int i = 0; i < n; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void CanonicalWriter::f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

namespace {

void write_point(CanonicalWriter& w, Vec2 p) {
  w.f64(p.x);
  w.f64(p.y);
}

void write_rect(CanonicalWriter& w, const Rect& r) {
  w.f64(r.x0);
  w.f64(r.y0);
  w.f64(r.x1);
  w.f64(r.y1);
}

}  // namespace

void write_entity(CanonicalWriter& w, const TerritoryEntity& e) {
  w.u32(e.id);
  w.u8(static_cast<std::uint8_t>(e.role));
  w.u8(static_cast<std::uint8_t>(e.mobility));
  w.u32(e.group);
  write_rect(w, e.home);
  write_point(w, e.position);
  write_point(w, e.fine_from);
  w.f64(e.speed);
  w.u8(e.waypoint ? 1 : 0);
  if (e.waypoint) write_point(w, *e.waypoint);
  w.u32(static_cast<std::uint32_t>(e.route.size()));
  for (const auto& p : e.route) write_point(w, p);
  w.u32(e.route_index);
  w.u32(e.dwell);
  w.u8(e.guidance_target ? 1 : 0);
  if (e.guidance_target) w.u32(*e.guidance_target);

  w.u32(static_cast<std::uint32_t>(e.inventory.size()));
  for (ProductTag p : e.inventory) w.u16(p);
  w.u32(static_cast<std::uint32_t>(e.interests.size()));
  for (const auto& i : e.interests) {
    w.u16(i.product);
    w.u8(i.zone ? 1 : 0);
    if (i.zone) w.u32(*i.zone);
    w.u8(i.subscribed ? 1 : 0);
  }
  w.u32(e.presence_cell);
  w.u32(e.seen.capacity());
  w.u32(static_cast<std::uint32_t>(e.seen.ids().size()));
  for (std::uint64_t id : e.seen.ids()) w.u64(id);

  w.u32(e.level);
  w.u8(e.region ? 1 : 0);
  if (e.region) w.u32(*e.region);
  w.u8(e.radio ? 1 : 0);
  if (e.radio) {
    w.f64(e.radio->range);
    w.u32(static_cast<std::uint32_t>(e.radio->neighbor_cache.size()));
    for (EntityId n : e.radio->neighbor_cache) w.u32(n);
    w.u64(e.radio->budget_slot);
    w.u32(e.radio->frames_in_slot);
  }

  w.u64(e.rng_counter);
  w.u64(e.next_seq);
  w.u32(e.next_msg);
  const auto& c = e.counters;
  for (std::uint64_t v : {c.chats_sent, c.chats_received, c.notifications_received, c.publications, c.adverts,
                          c.frames_received, c.frames_forwarded, c.frames_dropped, c.app_deliveries}) {
    w.u64(v);
  }
}

void write_event(CanonicalWriter& w, const Event& ev) {
  w.u64(ev.time.coarse_step);
  w.u32(ev.time.fine_phase);
  w.u32(ev.dst);
  w.u32(ev.src);
  w.u64(ev.seq);
  w.u8(static_cast<std::uint8_t>(ev.kind));
  w.u8(ev.src_level);
  w.u32(static_cast<std::uint32_t>(ev.payload.bytes.size()));
  for (std::byte b : ev.payload.bytes) w.u8(static_cast<std::uint8_t>(b));
}

std::string sha256_hex(std::span<const std::uint8_t> data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 || EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xF]);
  }
  return out;
}

RunDigest state_digest(std::span<const TerritoryEntity> entities, SimTime clock, std::span<const Event> pending) {
  std::vector<const TerritoryEntity*> ents;
  ents.reserve(entities.size());
  for (const auto& e : entities) ents.push_back(&e);
  std::sort(ents.begin(), ents.end(), [](const auto* a, const auto* b) { return a->id < b->id; });
  std::vector<const Event*> evs;
  evs.reserve(pending.size());
  for (const auto& ev : pending) evs.push_back(&ev);
  std::sort(evs.begin(), evs.end(), [](const auto* a, const auto* b) { return event_order_key(*a) < event_order_key(*b); });

  CanonicalWriter w;
  for (char ch : std::string(kDigestFormat)) w.u8(static_cast<std::uint8_t>(ch));
  w.u64(ents.size());
  for (const auto* e : ents) write_entity(w, *e);
  w.u64(clock.coarse_step);
  w.u32(clock.fine_phase);
  w.u64(evs.size());
  for (const auto* ev : evs) write_event(w, *ev);
  return {sha256_hex(w.bytes())};
}

RunDigest trace_digest(std::span<const TraceRecord> trace) {
  CanonicalWriter w;
  for (const auto& r : trace) {
    w.u64(r.key.time.coarse_step);
    w.u32(r.key.time.fine_phase);
    w.u32(r.key.dst);
    w.u32(r.key.src);
    w.u64(r.key.seq);
    w.u8(static_cast<std::uint8_t>(r.kind));
    w.u8(r.src_level);
    w.u8(r.dst_level);
    w.u8(r.msg_id ? 1 : 0);
    if (r.msg_id) w.u64(*r.msg_id);
  }
  return {sha256_hex(w.bytes())};
}

}  // namespace iotsim
