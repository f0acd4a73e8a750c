// Batch runner: iotsim --scenario FILE [overrides] [--out DIR]
//               iotsim --compare RUN_A RUN_B

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "iotsim/core/errors.hpp"
#include "iotsim/harness/outputs.hpp"
#include "iotsim/harness/scenario_config.hpp"
#include "iotsim/harness/simulation.hpp"

namespace {

int run_compare(const std::vector<std::string>& dirs) {
  const iotsim::CompareResult c = iotsim::compare_runs(dirs[0], dirs[1]);
  std::cout << "A: " << c.digest_a << '\n' << "B: " << c.digest_b << '\n';
  if (c.identical()) {
    std::cout << "identical over " << c.steps_compared << " steps\n";
    return 0;
  }
  if (c.first_divergent_step) {
    std::cout << "first divergent step: " << *c.first_divergent_step << '\n';
  } else {
    std::cout << "per-step checksums agree over " << c.steps_compared << " steps but final digests differ\n";
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel time-stepped IoT simulator"};
  std::string scenario;
  std::optional<std::uint32_t> lps;
  std::optional<std::uint64_t> steps;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> migration;
  std::optional<std::string> multilevel;
  std::optional<std::string> trace;
  std::optional<std::string> partition;
  std::optional<std::uint32_t> inject_delay;
  std::string out_dir;
  std::vector<std::string> compare;

  app.add_option("--scenario", scenario, "Scenario file (YAML)")->check(CLI::ExistingFile);
  app.add_option("--lps", lps, "Number of logical processes")->check(CLI::Range(1, 256));
  app.add_option("--steps", steps, "Coarse steps to run");
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--migration", migration, "Adaptive migration")->check(CLI::IsMember({"on", "off"}));
  app.add_option("--multilevel", multilevel, "Multilevel refinement")->check(CLI::IsMember({"on", "off"}));
  app.add_option("--trace", trace, "Trace verbosity")->check(CLI::IsMember({"full", "stats", "off"}));
  app.add_option("--partition", partition, "Initial partition")
      ->check(CLI::IsMember({"round_robin", "spatial_grid"}));
  app.add_option("--inject-delay-us", inject_delay, "Random delay before each EOS (testing aid)");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--compare", compare, "Compare two output directories")->expected(2);
  CLI11_PARSE(app, argc, argv);

  if (!compare.empty()) {
    try {
      return run_compare(compare);
    } catch (const std::exception& e) {
      std::cerr << "compare failed: " << e.what() << '\n';
      return 2;
    }
  }
  if (scenario.empty()) {
    std::cerr << "--scenario is required (or --compare A B)\n";
    return 2;
  }

  iotsim::ScenarioConfig cfg;
  try {
    cfg = iotsim::load_scenario(scenario);
    if (lps) cfg.n_lps = *lps;
    if (steps) cfg.total_coarse_steps = *steps;
    if (seed) cfg.seed = *seed;
    if (migration) cfg.migration_enabled = *migration == "on";
    if (multilevel) cfg.multilevel_enabled = *multilevel == "on";
    if (trace) cfg.trace = *iotsim::parse_trace_verbosity(*trace);
    if (partition) {
      cfg.partition = *partition == "spatial_grid" ? iotsim::PartitionStrategy::SpatialGrid
                                                   : iotsim::PartitionStrategy::RoundRobin;
    }
    if (inject_delay) cfg.inject_delay_us = *inject_delay;
    iotsim::validate_scenario(cfg);
  } catch (const iotsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  try {
    const iotsim::RunResult r = iotsim::run_simulation(cfg);
    if (!out_dir.empty()) iotsim::write_run_outputs(out_dir, cfg, r);
    const auto& m = r.metrics;
    std::cout << r.digest.line() << '\n';
    std::printf("entities %llu  lps %u  steps %llu\n", static_cast<unsigned long long>(cfg.population()), cfg.n_lps,
                static_cast<unsigned long long>(cfg.total_coarse_steps));
    std::printf("events %llu  local %llu  remote %llu  migrations %llu  refines %llu  coarsens %llu\n",
                static_cast<unsigned long long>(m.events_delivered), static_cast<unsigned long long>(m.local_sends),
                static_cast<unsigned long long>(m.remote_sends), static_cast<unsigned long long>(m.migrations),
                static_cast<unsigned long long>(m.refines), static_cast<unsigned long long>(m.coarsens));
    std::printf("wall %.3f s  mean %.4f s/step  max %.4f s/step\n", m.wall_seconds, m.mean_step_seconds,
                m.max_step_seconds);
    return 0;
  } catch (const iotsim::SimError& e) {
    if (e.step()) {
      std::cerr << "fatal error at step " << *e.step() << ": " << e.what() << '\n';
    } else {
      std::cerr << "fatal error: " << e.what() << '\n';
    }
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "fatal error: " << e.what() << '\n';
    return 1;
  }
}
