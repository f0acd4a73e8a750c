#include "iotsim/harness/outputs.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace iotsim {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  return in;
}

void write_trace(const std::filesystem::path& dir, const ScenarioConfig& cfg, const RunResult& r) {
  if (cfg.trace == TraceVerbosity::Off) return;
  auto out = open_out(dir / "trace.jsonl");
  out << json{{"format", "iotsim-trace-v1"}, {"verbosity", to_string(cfg.trace)}}.dump() << '\n';
  if (cfg.trace == TraceVerbosity::Full) {
    for (const auto& t : r.runtime.trace) {
      json rec = {{"step", t.key.time.coarse_step},
                  {"phase", t.key.time.fine_phase},
                  {"dst", t.key.dst},
                  {"src", t.key.src},
                  {"seq", t.key.seq},
                  {"kind", to_string(t.kind)},
                  {"src_level", t.src_level},
                  {"dst_level", t.dst_level}};
      if (t.key.dst == kTopicAddress) rec["dst"] = "topic";
      if (t.msg_id) rec["msg"] = *t.msg_id;
      out << rec.dump() << '\n';
    }
    return;
  }
  const std::uint64_t steps = cfg.total_coarse_steps;
  std::vector<std::uint64_t> events(steps, 0), local(steps, 0), remote(steps, 0);
  for (const auto& st : r.runtime.stats) {
    events[st.step] += st.events_processed;
    local[st.step] += st.local_sends;
    remote[st.step] += st.remote_sends;
  }
  for (std::uint64_t k = 0; k < steps; ++k) {
    out << json{{"step", k},
                {"events", events[k]},
                {"local_sends", local[k]},
                {"remote_sends", remote[k]},
                {"population", r.metrics.population[k]}}
               .dump()
        << '\n';
  }
}

}  // namespace

void write_run_outputs(const std::filesystem::path& dir, const ScenarioConfig& cfg, const RunResult& r) {
  std::filesystem::create_directories(dir);
  open_out(dir / "config.yaml") << serialize_scenario(cfg);

  {
    auto out = open_out(dir / "digest.txt");
    out << r.digest.line() << '\n';
    if (cfg.trace == TraceVerbosity::Full) out << "trace sha256 " << r.trace_digest.hex << '\n';
    out << "final_clock " << r.final_clock.coarse_step << ' ' << r.final_clock.fine_phase << '\n';
    out << "entities " << r.runtime.entities.size() << '\n';
    out << "pending_events " << r.runtime.pending.size() << '\n';
  }

  write_trace(dir, cfg, r);

  {
    auto out = open_out(dir / "stats.csv");
    out << "step,lp,hosted,events_processed,local_sends,remote_sends,eos_checksum\n";
    for (const auto& s : r.runtime.stats) {
      out << s.step << ',' << s.lp << ',' << s.hosted << ',' << s.events_processed << ',' << s.local_sends << ','
          << s.remote_sends << ',' << s.eos_checksum << '\n';
    }
  }
  {
    auto out = open_out(dir / "timing.csv");
    out << "step,lp,wall_ns,barrier_wait_fraction\n";
    for (const auto& s : r.runtime.stats) {
      out << s.step << ',' << s.lp << ',' << s.wall_ns << ',' << s.barrier_wait_fraction << '\n';
    }
  }
  {
    auto out = open_out(dir / "checksums.csv");
    out << "step,checksum\n";
    for (std::size_t k = 0; k < r.runtime.step_checksums.size(); ++k) {
      out << k << ',' << r.runtime.step_checksums[k] << '\n';
    }
  }
  {
    auto mig = open_out(dir / "migrations.jsonl");
    auto reg = open_out(dir / "regions.jsonl");
    for (const auto& plan : r.runtime.plans) {
      for (const auto& m : plan.migrations) {
        mig << json{{"step", plan.step},
                    {"entity", m.entity},
                    {"from", m.from_lp},
                    {"to", m.to_lp},
                    {"affinity", m.affinity},
                    {"forced", m.forced},
                    {"hosted_before", plan.hosted_before},
                    {"hosted_after", plan.hosted_after}}
                   .dump()
            << '\n';
      }
      for (const auto& a : plan.actions) {
        reg << json{{"step", plan.step},
                    {"phase", 0},
                    {"region_id", a.region},
                    {"action", to_string(a.kind)},
                    {"residents", a.resident_count},
                    {"trigger_value", a.resident_count}}
                   .dump()
            << '\n';
      }
    }
  }
}

std::vector<std::uint64_t> read_checksums(const std::filesystem::path& dir) {
  auto in = open_in(dir / "checksums.csv");
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::uint64_t> out;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    out.push_back(std::stoull(line.substr(comma + 1)));
  }
  return out;
}

std::string read_digest(const std::filesystem::path& dir) {
  auto in = open_in(dir / "digest.txt");
  std::string line;
  std::getline(in, line);
  return line;
}

CompareResult compare_runs(const std::filesystem::path& a, const std::filesystem::path& b) {
  CompareResult out;
  out.digest_a = read_digest(a);
  out.digest_b = read_digest(b);
  const auto ca = read_checksums(a);
  const auto cb = read_checksums(b);
  const std::size_t n = std::min(ca.size(), cb.size());
  for (std::size_t k = 0; k < n; ++k) {
    ++out.steps_compared;
    if (ca[k] != cb[k]) {
      out.first_divergent_step = k;
      return out;
    }
  }
  if (ca.size() != cb.size()) out.first_divergent_step = n;
  return out;
}

}  // namespace iotsim
