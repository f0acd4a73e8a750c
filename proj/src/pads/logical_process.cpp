#include "iotsim/pads/logical_process.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <thread>

#include "iotsim/iot/market.hpp"

namespace iotsim {

LpCounters& LpCounters::operator+=(const LpCounters& o) {
  events_scheduled += o.events_scheduled;
  events_delivered += o.events_delivered;
  local_sends += o.local_sends;
  remote_sends += o.remote_sends;
  cross_level_deliveries += o.cross_level_deliveries;
  cross_level_off_boundary += o.cross_level_off_boundary;
  late_deliveries += o.late_deliveries;
  fine_windows += o.fine_windows;
  fine_steps += o.fine_steps;
  fine_window_violations += o.fine_window_violations;
  frames_dropped += o.frames_dropped;
  migrated_in += o.migrated_in;
  migrated_out += o.migrated_out;
  return *this;
}

RuntimeShared::RuntimeShared(std::uint32_t n_lps) {
  for (std::uint32_t i = 0; i < n_lps; ++i) mailboxes_.push_back(std::make_unique<Mailbox>());
}

void RuntimeShared::fail(std::exception_ptr error) {
  {
    std::lock_guard lock(error_mutex_);
    if (!error_) error_ = std::move(error);
  }
  abort_.store(true, std::memory_order_release);
  for (auto& m : mailboxes_) m->wake();
}

std::exception_ptr RuntimeShared::error() const {
  std::lock_guard lock(error_mutex_);
  return error_;
}

LogicalProcess::LogicalProcess(LpId id, RuntimeShared& shared, const TerritoryBehavior& behavior,
                               RuntimeOptions options, ReplicatedState replica,
                               std::vector<TerritoryEntity> hosted)
    : id_(id),
      shared_(shared),
      behavior_(behavior),
      options_(std::move(options)),
      replica_(std::move(replica)),
      outbound_(options_.n_lps) {
  std::sort(hosted.begin(), hosted.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  const auto& mig = options_.plan.migration;
  for (auto& e : hosted) {
    const EntityId eid = e.id;
    Hosted h{std::move(e), mig.enabled ? InteractionWindow(mig.window, options_.n_lps) : InteractionWindow{},
             kNeverMigrated};
    auto [it, inserted] = hosted_.emplace(eid, std::move(h));
    if (!inserted) throw SimError("entity " + std::to_string(eid) + " hosted twice on LP " + std::to_string(id_));
    TerritoryEntity& ent = it->second.entity;
    Event tick = make_event(ent, ent.id, EventKind::MoveUpdate, Payload{}, SimTime::boundary(0));
    kernel_.schedule(tick);
    ++counters_.events_scheduled;
  }
}

std::vector<TerritoryEntity> LogicalProcess::entities() const {
  std::vector<TerritoryEntity> out;
  out.reserve(hosted_.size());
  for (const auto& [id, h] : hosted_) out.push_back(h.entity);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

void LogicalProcess::audit(std::uint64_t step, AuditKind kind) {
  audit_.push_back({step, kind, shared_.next_audit_seq()});
}

void LogicalProcess::run() {
  try {
    for (std::uint64_t k = 0; k < options_.steps; ++k) {
      const auto t0 = std::chrono::steady_clock::now();
      boundary(k);
      audit(k, AuditKind::StepBegin);
      current_ = LpStepStats{};
      current_.step = k;
      current_.lp = id_;
      current_.hosted = static_cast<std::uint32_t>(hosted_.size());
      run_step(k);
      const auto t_wait = std::chrono::steady_clock::now();
      exchange_eos(k);
      const auto t1 = std::chrono::steady_clock::now();
      current_.wall_ns = static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
      const auto waited = std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t_wait).count();
      current_.barrier_wait_fraction =
          current_.wall_ns > 0 ? static_cast<double>(waited) / static_cast<double>(current_.wall_ns) : 0.0;
      stats_.push_back(current_);
    }
  } catch (...) {
    shared_.fail(std::current_exception());
  }
}

// ---------------------------------------------------------------------------
// Message pump

void LogicalProcess::receive(Message&& m) {
  if (auto* batch = std::get_if<EventBatch>(&m)) {
    const SimTime earliest = SimTime::boundary(batch->step + 1);
    for (auto& ev : batch->events) {
      if (ev.time < earliest || ev.time < kernel_.now()) {
        ++counters_.late_deliveries;
        throw EventInPast("late delivery of event stamped " + ev.time.str() + " from LP " +
                              std::to_string(batch->from) + " at step " + std::to_string(batch->step),
                          batch->step);
      }
      kernel_.schedule(std::move(ev));
    }
  } else if (auto* eos = std::get_if<EosMessage>(&m)) {
    eos_[eos->step.coarse_step].push_back(*eos);
  } else if (auto* report = std::get_if<BoundaryReport>(&m)) {
    reports_[report->step].push_back(std::move(*report));
  } else if (auto* payload = std::get_if<MigrationPayload>(&m)) {
    payloads_[payload->step].push_back(std::move(*payload));
  }
}

template <class Done>
void LogicalProcess::pump(Done&& done, const char* waiting_for, std::uint64_t step) {
  const auto deadline = std::chrono::steady_clock::now() + options_.barrier_timeout;
  std::vector<Message> inbox;
  while (!done()) {
    inbox.clear();
    if (!shared_.mailbox(id_).wait_drain(inbox, deadline, [this] { return shared_.aborted(); })) {
      if (shared_.aborted()) throw RunAborted("LP " + std::to_string(id_) + " aborted", step);
      throw BarrierTimeout("LP " + std::to_string(id_) + " timed out waiting for " + waiting_for + " of step " +
                               std::to_string(step),
                           step);
    }
    for (auto& m : inbox) receive(std::move(m));
  }
}

// ---------------------------------------------------------------------------
// Coarse boundary

BoundaryReport LogicalProcess::make_report(std::uint64_t step) const {
  BoundaryReport r;
  r.lp = id_;
  r.step = step;
  r.hosted_count = static_cast<std::uint32_t>(hosted_.size());
  r.ops = pending_ops_;
  if (options_.plan.multilevel && !replica_.regions.empty()) {
    for (const auto& [id, h] : hosted_) {
      for (std::uint32_t i = 0; i < replica_.regions.size(); ++i) {
        if (replica_.regions[i].bounds.contains(h.entity.position)) r.candidates.push_back({i, id});
      }
    }
    std::sort(r.candidates.begin(), r.candidates.end());
  }
  if (options_.plan.migration.evaluation_step(step)) {
    for (const auto& [id, h] : hosted_) {
      if (auto p = propose_migration(id, id_, h.window, step - 1, options_.plan.migration)) r.proposals.push_back(*p);
    }
    std::sort(r.proposals.begin(), r.proposals.end(),
              [](const MigrationProposal& a, const MigrationProposal& b) { return a.entity < b.entity; });
  }
  return r;
}

void LogicalProcess::boundary(std::uint64_t step) {
  BoundaryReport mine = make_report(step);
  pending_ops_.clear();
  for (LpId peer = 0; peer < options_.n_lps; ++peer) {
    if (peer != id_) shared_.mailbox(peer).post(mine);
  }
  reports_[step].push_back(std::move(mine));
  pump([&] { return reports_[step].size() == options_.n_lps; }, "boundary reports", step);

  auto reports = std::move(reports_[step]);
  reports_.erase(step);
  std::sort(reports.begin(), reports.end(), [](const auto& a, const auto& b) { return a.lp < b.lp; });
  BoundaryPlan plan = plan_boundary(step, reports, replica_, options_.plan);
  execute_plan(plan);
  if (id_ == 0 && (!plan.actions.empty() || !plan.migrations.empty())) plans_.push_back(std::move(plan));
}

void LogicalProcess::execute_plan(const BoundaryPlan& plan) {
  const std::uint64_t step = plan.step;

  // Outgoing entities, grouped by destination.
  std::map<LpId, std::vector<EntityId>> outgoing;
  std::vector<LpId> senders;
  for (const auto& m : plan.migrations) {
    if (m.from_lp == id_) outgoing[m.to_lp].push_back(m.entity);
    if (m.to_lp == id_) senders.push_back(m.from_lp);
  }
  std::sort(senders.begin(), senders.end());
  senders.erase(std::unique(senders.begin(), senders.end()), senders.end());

  for (auto& [to, ids] : outgoing) {
    std::sort(ids.begin(), ids.end());
    auto events = kernel_.pending().extract_if(
        [&](const Event& ev) { return std::binary_search(ids.begin(), ids.end(), ev.dst); });
    MigrationPayload payload{id_, step, {}};
    for (EntityId eid : ids) {
      auto node = hosted_.extract(eid);
      if (node.empty()) {
        throw UnknownEntity("LP " + std::to_string(id_) + " asked to migrate entity " + std::to_string(eid) +
                                " it does not host",
                            step);
      }
      Hosted& h = node.mapped();
      MigratingEntity m{std::move(h.entity), {}, std::move(h.window), step};
      for (const auto& ev : events) {
        if (ev.dst == eid) m.pending.push_back(ev);
      }
      payload.entities.push_back(std::move(m));
      ++counters_.migrated_out;
    }
    shared_.mailbox(to).post(std::move(payload));
  }

  if (!senders.empty()) {
    pump([&] { return payloads_[step].size() == senders.size(); }, "migration payloads", step);
    auto arrived = std::move(payloads_[step]);
    payloads_.erase(step);
    for (auto& payload : arrived) {
      for (auto& m : payload.entities) {
        const EntityId eid = m.entity.id;
        for (auto& ev : m.pending) kernel_.schedule(std::move(ev));
        hosted_.emplace(eid, Hosted{std::move(m.entity), std::move(m.window), m.last_migrated});
        ++counters_.migrated_in;
      }
    }
  }

  // Level transitions are applied by whoever hosts the entity now.
  for (EntityId eid : plan.drops) {
    if (auto it = hosted_.find(eid); it != hosted_.end()) drop_entity(it->second.entity);
  }
  for (const auto& [eid, rid] : plan.lifts) {
    auto it = hosted_.find(eid);
    if (it == hosted_.end()) continue;
    const RefinementRegion* region = replica_.find_region(rid);
    if (!region) throw SimError("unknown region " + std::to_string(rid), step);
    lift_entity(it->second.entity, *region, options_.radio_range);
  }
}

// ---------------------------------------------------------------------------
// Step execution

FineWindow* LogicalProcess::window_of(const TerritoryEntity& e) {
  if (e.level == 0 || !e.region) return nullptr;
  for (auto& w : windows_) {
    if (w.region() == *e.region) return &w;
  }
  return nullptr;
}

const FineWindow* LogicalProcess::window_of(EntityId id) const {
  auto it = hosted_.find(id);
  if (it == hosted_.end() || it->second.entity.level == 0 || !it->second.entity.region) return nullptr;
  for (const auto& w : windows_) {
    if (w.region() == *it->second.entity.region) return &w;
  }
  return nullptr;
}

void LogicalProcess::run_step(std::uint64_t step) {
  step_ = step;
  step_checksum_ = 0;
  windows_.clear();
  std::uint32_t phases = 1;
  for (const auto& region : replica_.regions) {
    if (!region.refined() || region.owner != id_) continue;
    const std::uint32_t ratio = effective_ratio(region, replica_.regions);
    windows_.emplace_back(region.id, ratio, step, region.residents, options_.radio_range);
    phases = std::max(phases, ratio);
  }

  std::vector<Placed> positions;
  for (std::uint32_t phase = 0; phase < phases; ++phase) {
    for (auto& w : windows_) {
      if (phase >= w.ratio()) continue;
      positions.clear();
      for (EntityId rid : w.residents()) {
        const auto& e = hosted_.at(rid).entity;
        positions.push_back({rid, phase == 0 ? e.position : fine_position_at(e, phase, w.ratio())});
      }
      w.begin_phase(phase, positions);
      if (phase == 0 && behavior_.params().radio_enabled) {
        // Guidance follows the producer's current position at each boundary.
        for (EntityId rid : w.residents()) {
          auto& c = hosted_.at(rid).entity;
          if (c.role != Role::Consumer || !c.guidance_target || !w.is_resident(*c.guidance_target)) continue;
          const auto& p = hosted_.at(*c.guidance_target).entity;
          if (p.region == c.region) guide_to_producer(c, p);
        }
      }
    }
    const SimTime t{step, phase};
    now_ = t;
    const std::size_t n = kernel_.process_step(t, [this](const Event& ev) { dispatch(ev); });
    counters_.events_delivered += n;
    current_.events_processed += n;
  }

  for (auto& w : windows_) {
    ++counters_.fine_windows;
    counters_.fine_steps += w.phases_run();
    if (w.phases_run() != w.ratio()) ++counters_.fine_window_violations;
    for (auto& ev : w.close()) route(std::move(ev));
  }
}

void LogicalProcess::dispatch(const Event& ev) {
  auto it = hosted_.find(ev.dst);
  if (it == hosted_.end()) {
    throw UnknownEntity("event for entity " + std::to_string(ev.dst) + " reached LP " + std::to_string(id_) +
                            " which does not host it",
                        step_);
  }
  Hosted& h = it->second;
  TerritoryEntity& e = h.entity;
  h.window.record_processed(step_);
  if (ev.src_level != e.level) {
    ++counters_.cross_level_deliveries;
    if (!ev.time.on_boundary()) ++counters_.cross_level_off_boundary;
  }
  if (options_.record_trace) {
    TraceRecord rec{event_order_key(ev), ev.kind, ev.src_level, static_cast<std::uint8_t>(e.level), std::nullopt};
    if (ev.kind == EventKind::RadioFrame) {
      const auto frame = ev.payload.unpack<FrameRecord>();
      if (frame.type == FrameType::Dissemination) rec.msg_id = frame.msg_id;
    }
    trace_.push_back(rec);
  }
  behavior_.deliver(e, ev, *this);
}

Event LogicalProcess::make_event(TerritoryEntity& from, EntityId to, EventKind kind, const Payload& payload,
                                 SimTime time) {
  Event ev;
  ev.time = time;
  ev.src = from.id;
  ev.dst = to;
  ev.kind = kind;
  ev.src_level = static_cast<std::uint8_t>(from.level);
  ev.seq = from.next_seq++;
  ev.payload = payload;
  return ev;
}

void LogicalProcess::route(Event ev) {
  const LpId lp = replica_.routing.lp_of(ev.dst);
  step_checksum_ += event_hash(ev);
  ++counters_.events_scheduled;
  if (auto it = hosted_.find(ev.src); it != hosted_.end()) it->second.window.record_send(step_, lp);
  if (lp == id_) {
    kernel_.schedule(std::move(ev));
    ++counters_.local_sends;
    ++current_.local_sends;
  } else {
    outbound_[lp].push_back(std::move(ev));
    ++counters_.remote_sends;
    ++current_.remote_sends;
  }
}

void LogicalProcess::send(TerritoryEntity& from, EntityId to, EventKind kind, const Payload& payload) {
  FineWindow* w = window_of(from);
  if (!w) {
    route(make_event(from, to, kind, payload, next_boundary(now_)));
    return;
  }
  if (!w->is_resident(to)) {
    // Cross-level: held by the window and released at the next coarse boundary.
    Event ev = make_event(from, to, kind, payload, now_);
    ev.time = gate_cross_level_event(ev, from.level, 0, now_);
    w->hold(std::move(ev));
    return;
  }
  if (kind == EventKind::RadioFrame && behavior_.params().radio_enabled) {
    Event ev = make_event(from, to, kind, payload, next_fine_step(now_, w->ratio()));
    const auto nbrs = w->neighbors(from.id);
    if (!std::binary_search(nbrs.begin(), nbrs.end(), to)) {
      ++from.counters.frames_dropped;
      ++counters_.frames_dropped;
      return;
    }
    route(std::move(ev));
    return;
  }
  route(make_event(from, to, kind, payload, next_boundary(now_)));
}

void LogicalProcess::broadcast(TerritoryEntity& from, const Payload& payload) {
  FineWindow* w = window_of(from);
  if (!w || !from.radio) return;
  if (options_.frame_budget > 0) {
    const std::uint64_t slot = now_.coarse_step * w->ratio() + now_.fine_phase;
    if (from.radio->budget_slot != slot) {
      from.radio->budget_slot = slot;
      from.radio->frames_in_slot = 0;
    }
    if (from.radio->frames_in_slot >= options_.frame_budget) {
      ++from.counters.frames_dropped;
      ++counters_.frames_dropped;
      return;
    }
    ++from.radio->frames_in_slot;
  }
  const auto nbrs = w->neighbors(from.id);
  from.radio->neighbor_cache.assign(nbrs.begin(), nbrs.end());
  const SimTime t = next_fine_step(now_, w->ratio());
  for (EntityId n : nbrs) route(make_event(from, n, EventKind::RadioFrame, payload, t));
}

void LogicalProcess::schedule_tick(TerritoryEntity& e) {
  kernel_.schedule(make_event(e, e.id, EventKind::MoveUpdate, Payload{}, next_boundary(now_)));
  ++counters_.events_scheduled;
}

void LogicalProcess::publish(TerritoryEntity& from, const Publication& pub) {
  const std::uint64_t seq = from.next_seq++;
  if (options_.record_trace) {
    trace_.push_back({EventKey{now_, kTopicAddress, from.id, seq}, EventKind::Publication,
                      static_cast<std::uint8_t>(from.level), 0, std::nullopt});
  }
  NotificationRecord rec{};
  rec.product = pub.product.value_or(0);
  rec.producer = from.id;
  rec.x = pub.origin.x;
  rec.y = pub.origin.y;
  const Payload payload = Payload::pack(rec);
  FineWindow* w = window_of(from);
  for (EntityId r : iotsim::publish(pub, replica_.index)) {
    Event ev = make_event(from, r, EventKind::Notification, payload, next_boundary(now_));
    if (w && !w->is_resident(r)) {
      w->hold(std::move(ev));
    } else {
      route(std::move(ev));
    }
  }
}

void LogicalProcess::subscription_op(TerritoryEntity& e, SubscriptionOp::Action action, const Topic& topic) {
  pending_ops_.push_back({action, e.id, e.next_seq++, topic});
}

std::span<const EntityId> LogicalProcess::zone_members(ZoneId cell) const {
  return replica_.index.members(presence_topic(cell));
}

std::span<const EntityId> LogicalProcess::radio_neighbors(EntityId id) const {
  const FineWindow* w = window_of(id);
  if (!w) return {};
  return w->neighbors(id);
}

// ---------------------------------------------------------------------------
// End-Of-Step barrier

void LogicalProcess::exchange_eos(std::uint64_t step) {
  if (options_.inject_delay_us > 0) {
    thread_local std::mt19937_64 jitter(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    std::uniform_int_distribution<std::uint32_t> us(0, options_.inject_delay_us);
    std::this_thread::sleep_for(std::chrono::microseconds(us(jitter)));
  }
  current_.eos_checksum = step_checksum_;
  for (LpId peer = 0; peer < options_.n_lps; ++peer) {
    if (peer == id_) continue;
    shared_.mailbox(peer).post(EventBatch{id_, step, std::move(outbound_[peer])});
    outbound_[peer].clear();
  }
  audit(step, AuditKind::EosSent);
  const EosMessage mine{id_, SimTime::boundary(step), step_checksum_, replica_.routing.version()};
  for (LpId peer = 0; peer < options_.n_lps; ++peer) {
    if (peer != id_) shared_.mailbox(peer).post(mine);
  }
  pump([&] { return eos_[step].size() + 1 == options_.n_lps; }, "EOS", step);
  std::uint64_t checksum = step_checksum_;
  for (const auto& eos : eos_[step]) {
    if (eos.routing_version != replica_.routing.version()) {
      throw StaleRouting("LP " + std::to_string(eos.sender_lp) + " ran step " + std::to_string(step) +
                             " with routing version " + std::to_string(eos.routing_version) + ", LP " +
                             std::to_string(id_) + " has " + std::to_string(replica_.routing.version()),
                         step);
    }
    checksum += eos.checksum;
  }
  eos_.erase(step);
  audit(step, AuditKind::EosComplete);
  step_checksums_.push_back(checksum);
  kernel_.advance_to(SimTime::boundary(step + 1));
}

}  // namespace iotsim
