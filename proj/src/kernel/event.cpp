#include "iotsim/kernel/event.hpp"

namespace iotsim {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::MoveUpdate: return "move-update";
    case EventKind::RadioFrame: return "radio-frame";
    case EventKind::Publication: return "publication";
    case EventKind::Notification: return "notification";
    case EventKind::Control: return "control";
  }
  return "unknown";
}

namespace {

constexpr std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= h >> 31;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  return h;
}

}  // namespace

std::uint64_t event_hash(const Event& ev) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  h = mix(h, ev.time.coarse_step);
  h = mix(h, ev.time.fine_phase);
  h = mix(h, (static_cast<std::uint64_t>(ev.dst) << 32) | ev.src);
  h = mix(h, ev.seq);
  h = mix(h, static_cast<std::uint64_t>(ev.kind));
  for (std::size_t i = 0; i < Payload::kCapacity; i += 8) {
    std::uint64_t word;
    std::memcpy(&word, ev.payload.bytes.data() + i, 8);
    h = mix(h, word);
  }
  return h;
}

}  // namespace iotsim
