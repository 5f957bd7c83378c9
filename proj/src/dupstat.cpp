// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#include "mcasim/dupstat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mcasim::dupstat {

namespace {
// Within-slot ordering: reports cancel before arrivals enqueue and
// transmissions fire.
constexpr int kPrioReport = 0;
constexpr int kPrioArrival = 1;
constexpr int kPrioTx = 2;
}  // namespace

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::SingleConnectivity: return "sc";
    case Mode::MultiConnectivity: return "mc";
    case Mode::MultiConnectivityDiscard: return "mc_discard";
  }
  return "?";
}

void Config::validate() const {
  if (duplication_set_size < 2)
    throw ConfigError("dupstat.duplication_set_size: must be >= 2");
  if (harq_rtt_slots < 1) throw ConfigError("dupstat.harq_rtt_slots: must be >= 1");
  if (report_delay_slots < 0)
    throw ConfigError("dupstat.report_delay_slots: must be >= 0");
  if (packet_count < 1) throw ConfigError("dupstat.packet_count: must be >= 1");
  if (!(outage_target > 0.0 && outage_target <= 1.0))
    throw ConfigError("dupstat.outage_target: must be in (0, 1]");
  if (isolated_stride_slots < 1)
    throw ConfigError("dupstat.isolated_stride_slots: must be >= 1");
  if (!(poisson_rate_per_slot > 0.0))
    throw ConfigError("dupstat.poisson_rate_per_slot: must be > 0");
  if (modes.empty()) throw ConfigError("dupstat.modes: at least one mode required");
  if (link.fading == Fading::None && link.mean_snr_db < link.target_snr_db)
    throw ConfigError("dupstat.link: degenerate fading below target never delivers");
}

double ModeResult::tx_per_delivered() const {
  return delivered > 0 ? static_cast<double>(transmissions) / static_cast<double>(delivered)
                       : 0.0;
}

double ModeResult::empirical_attempt_failure() const {
  return transmissions > 0
             ? static_cast<double>(failed_attempts) / static_cast<double>(transmissions)
             : 0.0;
}

const ModeResult* ExperimentResult::find(Mode mode) const {
  for (const auto& m : modes)
    if (m.mode == mode) return &m;
  return nullptr;
}

std::int64_t analytic_outage_latency_slots(double link_failure_prob, int link_count,
                                           double target_prob, int harq_rtt_slots) {
  const double q = std::pow(link_failure_prob, link_count);
  if (q >= 1.0) return -1;
  std::int64_t n = 1;
  double qn = q;
  while (qn > target_prob) {
    qn *= q;
    ++n;
    if (n > 10'000'000) return -1;
  }
  return 1 + (n - 1) * static_cast<std::int64_t>(harq_rtt_slots);
}

double analytic_tx_per_delivered(double link_failure_prob, int link_count) {
  return static_cast<double>(link_count) / (1.0 - link_failure_prob);
}

DuplicationSim::DuplicationSim(Simulator& sim, const Config& cfg, Mode mode)
    : sim_(sim), cfg_(cfg), mode_(mode) {
  active_nodes_ = mode == Mode::SingleConnectivity ? 1 : cfg.duplication_set_size;
  nodes_.reserve(static_cast<std::size_t>(cfg.duplication_set_size));
  for (int i = 0; i < cfg.duplication_set_size; ++i) {
    // Keyed by node only: the same per-(node, seq) draw sequence backs every
    // mode, which is what the coupled-run invariants rely on.
    nodes_.push_back(Node{{}, sim.stream("link:" + std::to_string(i))});
  }
}

void DuplicationSim::enqueue_packet(std::int64_t seq, Slot arrival_slot) {
  if (seq != static_cast<std::int64_t>(records_.size())) {
    if (seq < static_cast<std::int64_t>(records_.size()))
      throw SimulationError("enqueue_packet: duplicate seq " + std::to_string(seq));
    throw SimulationError("enqueue_packet: seq " + std::to_string(seq) +
                          " out of order");
  }
  records_.push_back(DeliveryRecord{seq, arrival_slot, -1, 0});
  const bool dup = mode_ != Mode::SingleConnectivity;
  for (int i = 0; i < active_nodes_; ++i) {
    Node& node = nodes_[static_cast<std::size_t>(i)];
    node.queue.push_back(
        Copy{seq, dup, node.link_base.fork(static_cast<std::uint64_t>(seq)), -1});
    if (node.queue.size() == 1) schedule_tx(i, arrival_slot + 1);
  }
}

void DuplicationSim::schedule_tx(int node, Slot slot) {
  Copy& head = nodes_[static_cast<std::size_t>(node)].queue.front();
  head.next_tx_slot = slot;
  const std::int64_t seq = head.seq;
  sim_.schedule(slot, kPrioTx, [this, node, seq, slot] { transmit(node, seq, slot); });
}

void DuplicationSim::transmit(int node, std::int64_t seq, Slot slot) {
  Node& n = nodes_[static_cast<std::size_t>(node)];
  // Stale event: the copy was delivered or discarded after scheduling.
  if (n.queue.empty()) return;
  Copy& head = n.queue.front();
  if (head.seq != seq || head.next_tx_slot != slot) return;

  ++transmissions_;
  ++records_[static_cast<std::size_t>(seq)].total_transmissions;
  const double snr = draw_snr(cfg_.link, head.draws);
  if (decode_outcome(snr, cfg_.link.target_snr_linear())) {
    deliver(node, seq, slot);
    return;
  }
  ++failed_attempts_;
  // NACK: retransmission becomes due one HARQ round-trip later.
  schedule_tx(node, slot + cfg_.harq_rtt_slots);
}

void DuplicationSim::deliver(int node, std::int64_t seq, Slot slot) {
  DeliveryRecord& rec = records_[static_cast<std::size_t>(seq)];
  const bool first = rec.first_success_slot < 0;
  if (first) {
    rec.first_success_slot = slot;
    ++delivered_;
    latency_slots_.add(static_cast<double>(slot - rec.arrival_slot));
    if (mode_ == Mode::MultiConnectivityDiscard &&
        nodes_[static_cast<std::size_t>(node)].queue.front().dup_flag) {
      ++reports_emitted_;
      for (int other = 0; other < active_nodes_; ++other) {
        if (other == node) continue;
        sim_.schedule(slot + cfg_.report_delay_slots, kPrioReport,
                      [this, other, seq] { on_status_report(other, seq); });
      }
    }
  }
  // PHY ACK to the delivering node; a non-first success is the UE discarding
  // a duplicate while still acknowledging it.
  pop_head(node, slot);
}

void DuplicationSim::pop_head(int node, Slot now) {
  Node& n = nodes_[static_cast<std::size_t>(node)];
  n.queue.pop_front();
  if (!n.queue.empty()) schedule_tx(node, now + 1);
}

void DuplicationSim::on_status_report(int node, std::int64_t seq) {
  Node& n = nodes_[static_cast<std::size_t>(node)];
  for (auto it = n.queue.begin(); it != n.queue.end(); ++it) {
    if (it->seq != seq) continue;
    if (it == n.queue.begin()) {
      // Cancels the pending (re)transmission; the outstanding event goes
      // stale through the head-identity guard.
      pop_head(node, sim_.now());
    } else {
      n.queue.erase(it);
    }
    return;
  }
  // Unknown seq: already transmitted out or never buffered here.
}

std::vector<std::int64_t> DuplicationSim::buffered_seqs(int node) const {
  std::vector<std::int64_t> out;
  for (const auto& c : nodes_[static_cast<std::size_t>(node)].queue)
    out.push_back(c.seq);
  return out;
}

ExperimentResult run_experiment(const Config& cfg, std::uint64_t master_seed) {
  cfg.validate();
  ExperimentResult result;
  for (Mode mode : cfg.modes) {
    Simulator sim(master_seed);
    DuplicationSim dup(sim, cfg, mode);

    // Arrival chain; the schedule is identical for every mode (it depends on
    // the master seed only), keeping runs coupled.
    if (cfg.arrivals == Config::Arrivals::Isolated) {
      const std::int64_t stride = cfg.isolated_stride_slots;
      std::function<void(std::int64_t)> arrive = [&](std::int64_t seq) {
        dup.enqueue_packet(seq, sim.now());
        if (seq + 1 < cfg.packet_count)
          sim.schedule((seq + 1) * stride, kPrioArrival, [&arrive, seq] { arrive(seq + 1); });
      };
      sim.schedule(0, kPrioArrival, [&arrive] { arrive(0); });
      sim.run_until_empty();
    } else {
      RngStream arrivals = sim.stream("arrivals");
      // Continuous-time Poisson process floored onto the slot grid.
      double next_time = arrivals.exponential(1.0 / cfg.poisson_rate_per_slot);
      std::int64_t next_seq = 0;
      std::function<void()> arrive = [&]() {
        dup.enqueue_packet(next_seq, sim.now());
        ++next_seq;
        if (next_seq < cfg.packet_count) {
          next_time += arrivals.exponential(1.0 / cfg.poisson_rate_per_slot);
          Slot next = static_cast<Slot>(std::floor(next_time));
          if (next < sim.now()) next = sim.now();
          sim.schedule(next, kPrioArrival, [&arrive] { arrive(); });
        }
      };
      sim.schedule(static_cast<Slot>(std::floor(next_time)), kPrioArrival,
                   [&arrive] { arrive(); });
      sim.run_until_empty();
    }

    ModeResult mr;
    mr.mode = mode;
    mr.packets = cfg.packet_count;
    mr.delivered = dup.delivered();
    mr.transmissions = dup.transmissions();
    mr.failed_attempts = dup.failed_attempts();
    mr.reports_emitted = dup.reports_emitted();
    mr.latency_slots = dup.take_latency();
    if (cfg.keep_records) mr.records = dup.take_records();
    result.modes.push_back(std::move(mr));
  }
  return result;
}

}  // namespace mcasim::dupstat
