#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "iotsim/harness/scenario_config.hpp"
#include "iotsim/harness/simulation.hpp"

namespace iotsim {

/// Writes config.yaml, digest.txt, trace.jsonl, stats.csv, timing.csv,
/// checksums.csv, migrations.jsonl and regions.jsonl into `dir`. Everything
/// except timing.csv is a pure function of the config.
void write_run_outputs(const std::filesystem::path& dir, const ScenarioConfig& cfg, const RunResult& result);

struct CompareResult {
  std::string digest_a;
  std::string digest_b;
  std::uint64_t steps_compared = 0;
  /// First step whose global EOS checksum differs (or that only one run has).
  std::optional<std::uint64_t> first_divergent_step;

  bool identical() const { return digest_a == digest_b && !first_divergent_step; }
};

/// Compares two output directories through their digest.txt and
/// checksums.csv.
CompareResult compare_runs(const std::filesystem::path& a, const std::filesystem::path& b);

std::vector<std::uint64_t> read_checksums(const std::filesystem::path& dir);
std::string read_digest(const std::filesystem::path& dir);

}  // namespace iotsim
