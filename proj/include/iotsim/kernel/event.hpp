#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <string_view>
#include <type_traits>

#include "iotsim/core/ids.hpp"
#include "iotsim/kernel/sim_time.hpp"

namespace iotsim {

enum class EventKind : std::uint8_t {
  MoveUpdate = 0,
  RadioFrame = 1,
  Publication = 2,
  Notification = 3,
  Control = 4,
};

std::string_view to_string(EventKind kind);

/// Events addressed to a topic rather than an entity (publications) carry this
/// destination. They are recorded in the trace but never scheduled.
inline constexpr EntityId kTopicAddress = kNoEntity;

/// Fixed-layout opaque payload. Each event kind packs a trivially copyable
/// record into it; there is no reflective serialization.
struct Payload {
  static constexpr std::size_t kCapacity = 40;
  std::array<std::byte, kCapacity> bytes{};

  template <class T>
  static Payload pack(const T& record) {
    static_assert(std::is_trivially_copyable_v<T> && sizeof(T) <= kCapacity);
    Payload p;
    std::memcpy(p.bytes.data(), &record, sizeof(T));
    return p;
  }

  template <class T>
  T unpack() const {
    static_assert(std::is_trivially_copyable_v<T> && sizeof(T) <= kCapacity);
    T record;
    std::memcpy(&record, bytes.data(), sizeof(T));
    return record;
  }

  friend bool operator==(const Payload&, const Payload&) = default;
};

struct Event {
  SimTime time;
  EntityId src = kNoEntity;
  EntityId dst = kNoEntity;
  EventKind kind = EventKind::Control;
  /// Model level of the sender at emission; used to audit cross-level
  /// deliveries. Not part of the ordering key.
  std::uint8_t src_level = 0;
  std::uint64_t seq = 0;
  Payload payload;

  friend bool operator==(const Event&, const Event&) = default;
};

/// Total-order key: (time, dst, src, seq). Unique across a run because seq is
/// per-source monotone.
struct EventKey {
  SimTime time;
  EntityId dst = 0;
  EntityId src = 0;
  std::uint64_t seq = 0;

  friend constexpr auto operator<=>(const EventKey&, const EventKey&) = default;
};

inline EventKey event_order_key(const Event& ev) { return {ev.time, ev.dst, ev.src, ev.seq}; }

struct EventKeyLess {
  bool operator()(const Event& a, const Event& b) const {
    return event_order_key(a) < event_order_key(b);
  }
};

/// 64-bit mixing hash of an event's key, kind and payload. Used for EOS
/// checksums, which are summed so the per-step total does not depend on
/// which LP emitted what.
std::uint64_t event_hash(const Event& ev);

}  // namespace iotsim
