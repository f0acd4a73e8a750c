#include <doctest.h>
#include <openssl/sha.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "iotsim/harness/digest.hpp"
#include "iotsim/harness/outputs.hpp"
#include "iotsim/harness/scenario_config.hpp"
#include "iotsim/harness/simulation.hpp"

using namespace iotsim;
namespace fs = std::filesystem;

namespace {

// Independent little-endian encoder for the digest layout.
struct Bytes {
  std::string s;
  template <class T>
  void le(T v) {
    static_assert(std::is_integral_v<T>);
    for (std::size_t i = 0; i < sizeof(T); ++i) s.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xFF));
  }
  void d(double v) { le(std::bit_cast<std::uint64_t>(v)); }
  void flag(bool b) { le<std::uint8_t>(b ? 1 : 0); }
};

void encode(Bytes& b, const TerritoryEntity& e) {
  b.le<std::uint32_t>(e.id);
  b.le(static_cast<std::uint8_t>(e.role));
  b.le(static_cast<std::uint8_t>(e.mobility));
  b.le<std::uint32_t>(e.group);
  for (double v : {e.home.x0, e.home.y0, e.home.x1, e.home.y1, e.position.x, e.position.y, e.fine_from.x,
                   e.fine_from.y, e.speed}) {
    b.d(v);
  }
  b.flag(e.waypoint.has_value());
  if (e.waypoint) {
    b.d(e.waypoint->x);
    b.d(e.waypoint->y);
  }
  b.le<std::uint32_t>(static_cast<std::uint32_t>(e.route.size()));
  for (auto p : e.route) {
    b.d(p.x);
    b.d(p.y);
  }
  b.le<std::uint32_t>(e.route_index);
  b.le<std::uint32_t>(e.dwell);
  b.flag(e.guidance_target.has_value());
  if (e.guidance_target) b.le<std::uint32_t>(*e.guidance_target);
  b.le<std::uint32_t>(static_cast<std::uint32_t>(e.inventory.size()));
  for (auto p : e.inventory) b.le<std::uint16_t>(p);
  b.le<std::uint32_t>(static_cast<std::uint32_t>(e.interests.size()));
  for (const auto& i : e.interests) {
    b.le<std::uint16_t>(i.product);
    b.flag(i.zone.has_value());
    if (i.zone) b.le<std::uint32_t>(*i.zone);
    b.flag(i.subscribed);
  }
  b.le<std::uint32_t>(e.presence_cell);
  b.le<std::uint32_t>(e.seen.capacity());
  b.le<std::uint32_t>(static_cast<std::uint32_t>(e.seen.ids().size()));
  for (auto id : e.seen.ids()) b.le<std::uint64_t>(id);
  b.le<std::uint32_t>(e.level);
  b.flag(e.region.has_value());
  if (e.region) b.le<std::uint32_t>(*e.region);
  b.flag(e.radio.has_value());
  if (e.radio) {
    b.d(e.radio->range);
    b.le<std::uint32_t>(static_cast<std::uint32_t>(e.radio->neighbor_cache.size()));
    for (auto n : e.radio->neighbor_cache) b.le<std::uint32_t>(n);
    b.le<std::uint64_t>(e.radio->budget_slot);
    b.le<std::uint32_t>(e.radio->frames_in_slot);
  }
  b.le<std::uint64_t>(e.rng_counter);
  b.le<std::uint64_t>(e.next_seq);
  b.le<std::uint32_t>(e.next_msg);
  const auto& c = e.counters;
  for (auto v : {c.chats_sent, c.chats_received, c.notifications_received, c.publications, c.adverts,
                 c.frames_received, c.frames_forwarded, c.frames_dropped, c.app_deliveries}) {
    b.le<std::uint64_t>(v);
  }
}

void encode(Bytes& b, const Event& ev) {
  b.le<std::uint64_t>(ev.time.coarse_step);
  b.le<std::uint32_t>(ev.time.fine_phase);
  b.le<std::uint32_t>(ev.dst);
  b.le<std::uint32_t>(ev.src);
  b.le<std::uint64_t>(ev.seq);
  b.le(static_cast<std::uint8_t>(ev.kind));
  b.le<std::uint8_t>(ev.src_level);
  b.le<std::uint32_t>(static_cast<std::uint32_t>(ev.payload.bytes.size()));
  for (auto x : ev.payload.bytes) b.le(static_cast<std::uint8_t>(x));
}

std::string openssl_sha256(const std::string& data) {
  unsigned char md[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), md);
  char hex[2 * SHA256_DIGEST_LENGTH + 1];
  for (int i = 0; i < SHA256_DIGEST_LENGTH; ++i) std::snprintf(hex + 2 * i, 3, "%02x", md[i]);
  return hex;
}

ScenarioConfig tiny_config() {
  ScenarioConfig c;
  c.seed = 3;
  c.width = 400;
  c.height = 400;
  c.producers = 10;
  c.consumers = 30;
  c.relays = 30;
  c.presence_grid = 2;
  c.total_coarse_steps = 30;
  c.trace = TraceVerbosity::Full;
  c.multilevel_enabled = true;
  RegionConfig r;
  r.bounds = {50, 50, 250, 250};
  r.schedule = {{5, 20}};
  c.regions = {r};
  return c;
}

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("iotsim_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("minimal scenario takes every default") {
  const ScenarioConfig c = parse_scenario("seed: 9\n");
  CHECK(c.seed == 9);
  CHECK(c.migration_alpha == doctest::Approx(0.7));
  CHECK(c.migration_beta == doctest::Approx(0.25));
  CHECK(c.migration_window == 16);
  CHECK(c.migration_interval == 8);
  CHECK(c.n_lps == 1);
  CHECK(c.max_level == 1);
  CHECK_FALSE(c.multilevel_enabled);
  const ScenarioConfig r = parse_scenario("multilevel:\n  enabled: true\n  regions:\n    - bounds: [0, 0, 10, 10]\n");
  REQUIRE(r.regions.size() == 1);
  CHECK(r.regions[0].ratio == 3);
  CHECK(r.regions[0].theta_hi == 50);
  CHECK(r.regions[0].theta_lo == 30);
}

TEST_CASE("theta_lo at or above theta_hi is rejected") {
  const char* text =
      "multilevel:\n  enabled: true\n  regions:\n    - bounds: [0, 0, 10, 10]\n      theta_hi: 30\n      theta_lo: 30\n";
  try {
    parse_scenario(text);
    FAIL("accepted");
  } catch (const ValidationError& e) {
    CHECK(e.key() == "multilevel.regions[0].theta_lo");
    CHECK(std::string(e.what()).find("hysteresis") != std::string::npos);
  }
}

TEST_CASE("unknown keys and bad types are named") {
  try {
    parse_scenario("seed: 1\nmigraton:\n  enabled: true\n");
    FAIL("accepted");
  } catch (const ParseError& e) {
    CHECK(e.key() == "migraton");
  }
  try {
    parse_scenario("n_lps: many\n");
    FAIL("accepted");
  } catch (const ParseError& e) {
    CHECK(e.key() == "n_lps");
  }
  CHECK_THROWS_AS(parse_scenario("n_lps: 0\n"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("total_coarse_steps: 0\n"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("seed: [1\n"), ParseError);
}

TEST_CASE("scenario files survive a serialize round trip") {
  for (const char* name : {"smart-market.cfg", "nested-market.cfg", "clustered.cfg"}) {
    const ScenarioConfig a = load_scenario(fs::path(IOTSIM_SCENARIO_DIR) / name);
    const ScenarioConfig b = parse_scenario(serialize_scenario(a));
    CAPTURE(name);
    CHECK(a == b);
  }
  ScenarioConfig odd = tiny_config();
  odd.migration_alpha = 0.1 + 0.2;
  odd.scripted.push_back({3, {1.5, 2.25}, {0.1, 0}, {{9, 9}, {1, 1}}, 0.7});
  CHECK(parse_scenario(serialize_scenario(odd)) == odd);
}

TEST_CASE("state digest matches an independent encoding") {
  const RunResult r = run_simulation(tiny_config());
  Bytes b;
  b.s = kDigestFormat;
  b.le<std::uint64_t>(r.runtime.entities.size());
  for (const auto& e : r.runtime.entities) encode(b, e);
  b.le<std::uint64_t>(r.final_clock.coarse_step);
  b.le<std::uint32_t>(r.final_clock.fine_phase);
  b.le<std::uint64_t>(r.runtime.pending.size());
  for (const auto& ev : r.runtime.pending) encode(b, ev);
  CHECK(r.digest.hex == openssl_sha256(b.s));
  CHECK(r.digest.line() == "iotsim-digest-v1 sha256 " + r.digest.hex);
}

TEST_CASE("state digest ignores input order and sees single-bit changes") {
  const RunResult r = run_simulation(tiny_config());
  auto ents = r.runtime.entities;
  auto pending = r.runtime.pending;
  std::mt19937 gen(1);
  std::shuffle(ents.begin(), ents.end(), gen);
  std::shuffle(pending.begin(), pending.end(), gen);
  CHECK(state_digest(ents, r.final_clock, pending) == r.digest);

  auto flipped = r.runtime.entities;
  flipped[7].position.x = std::bit_cast<double>(std::bit_cast<std::uint64_t>(flipped[7].position.x) ^ 1U);
  CHECK_FALSE(state_digest(flipped, r.final_clock, r.runtime.pending) == r.digest);
  CHECK_FALSE(state_digest(r.runtime.entities, {r.final_clock.coarse_step + 1, 0}, r.runtime.pending) == r.digest);
}

TEST_CASE("an empty population runs clean") {
  ScenarioConfig c;
  c.total_coarse_steps = 10;
  c.trace = TraceVerbosity::Full;
  c.n_lps = 2;
  const RunResult r = run_simulation(c);
  CHECK(r.runtime.entities.empty());
  CHECK(r.runtime.trace.empty());
  CHECK(r.final_clock == SimTime{10, 0});
}

TEST_CASE("same seed reproduces and LP count does not matter") {
  ScenarioConfig c = tiny_config();
  const RunResult a = run_simulation(c);
  const RunResult b = run_simulation(c);
  CHECK(a.digest == b.digest);
  CHECK(a.trace_digest == b.trace_digest);
  CHECK(a.runtime.step_checksums == b.runtime.step_checksums);
  c.n_lps = 4;
  const RunResult d = run_simulation(c);
  CHECK(d.digest == a.digest);
  CHECK(d.runtime.step_checksums == a.runtime.step_checksums);
  c.seed = 4;
  CHECK_FALSE(run_simulation(c).digest == a.digest);
}

TEST_CASE("outputs are written and compared") {
  ScenarioConfig c = tiny_config();
  c.migration_enabled = true;
  c.n_lps = 2;
  const auto da = temp_dir("a"), db = temp_dir("b"), dc = temp_dir("c");
  write_run_outputs(da, c, run_simulation(c));
  for (const char* f : {"config.yaml", "digest.txt", "trace.jsonl", "stats.csv", "timing.csv", "checksums.csv",
                        "migrations.jsonl", "regions.jsonl"}) {
    CHECK(fs::exists(da / f));
  }
  CHECK(load_scenario(da / "config.yaml") == c);

  c.n_lps = 3;
  write_run_outputs(db, c, run_simulation(c));
  const auto same = compare_runs(da, db);
  CHECK(same.identical());
  CHECK(same.steps_compared == c.total_coarse_steps);

  c.seed = 99;
  write_run_outputs(dc, c, run_simulation(c));
  const auto diff = compare_runs(da, dc);
  CHECK_FALSE(diff.identical());
  REQUIRE(diff.first_divergent_step.has_value());
  CHECK(*diff.first_divergent_step == 0);
  for (const auto& d : {da, db, dc}) fs::remove_all(d);
}
