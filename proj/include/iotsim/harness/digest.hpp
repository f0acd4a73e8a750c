#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "iotsim/iot/entity.hpp"
#include "iotsim/kernel/event.hpp"
#include "iotsim/pads/logical_process.hpp"

namespace iotsim {

inline constexpr const char* kDigestFormat = "iotsim-digest-v1";

/// Little-endian byte sink for canonical serialization. Doubles are written
/// as their IEEE-754 bit patterns.
class CanonicalWriter {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f64(double v);
  void raw(std::span<const std::uint8_t> data) { bytes_.insert(bytes_.end(), data.begin(), data.end()); }

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

 private:
  void put(std::uint64_t v, int n);
  std::vector<std::uint8_t> bytes_;
};

void write_entity(CanonicalWriter& w, const TerritoryEntity& e);
void write_event(CanonicalWriter& w, const Event& ev);

std::string sha256_hex(std::span<const std::uint8_t> data);

struct RunDigest {
  std::string hex;

  /// "iotsim-digest-v1 sha256 <hex>"
  std::string line() const { return std::string(kDigestFormat) + " sha256 " + hex; }
  friend bool operator==(const RunDigest&, const RunDigest&) = default;
};

/// SHA-256 of the canonical serialization of the quiescent state: entities
/// by id, the clock, then the undelivered events by event key. The inputs may
/// be in any order.
RunDigest state_digest(std::span<const TerritoryEntity> entities, SimTime clock, std::span<const Event> pending);

/// SHA-256 over the trace records in the order given.
RunDigest trace_digest(std::span<const TraceRecord> trace);

}  // namespace iotsim
