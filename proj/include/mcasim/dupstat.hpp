// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "mcasim/engine.hpp"
#include "mcasim/metrics.hpp"
#include "mcasim/radio.hpp"

namespace mcasim::dupstat {

// SC serves from the macro node only; the MC modes duplicate every packet
// across the whole duplication set. MC_discard adds the UE status report
// that lets the non-delivering nodes drop their copies.
enum class Mode { SingleConnectivity, MultiConnectivity, MultiConnectivityDiscard };

const char* mode_name(Mode mode);

struct Config {
  LinkModel link{10.0, 0.0, Fading::Rayleigh};
  int duplication_set_size = 2;  // node 0 is the SC serving (macro) node
  int harq_rtt_slots = 4;
  int report_delay_slots = 1;
  std::int64_t packet_count = 1'000'000;
  double outage_target = 1e-5;

  // Isolated spaces arrivals a fixed stride apart so each packet is alone in
  // the system (the cell-edge single-user regime); Poisson exposes queueing.
  enum class Arrivals { Isolated, Poisson };
  Arrivals arrivals = Arrivals::Isolated;
  int isolated_stride_slots = 64;
  double poisson_rate_per_slot = 0.05;

  bool keep_records = false;  // retain per-packet delivery records
  std::vector<Mode> modes{Mode::SingleConnectivity, Mode::MultiConnectivity,
                          Mode::MultiConnectivityDiscard};

  void validate() const;  // throws ConfigError
};

// End-to-end fate of one PDCP packet.
struct DeliveryRecord {
  std::int64_t seq = 0;
  Slot arrival_slot = 0;
  Slot first_success_slot = -1;  // -1 until delivered
  std::uint32_t total_transmissions = 0;
};

struct ModeResult {
  Mode mode = Mode::SingleConnectivity;
  std::int64_t packets = 0;
  std::int64_t delivered = 0;
  std::uint64_t transmissions = 0;
  std::uint64_t failed_attempts = 0;
  std::uint64_t reports_emitted = 0;  // one per delivered flagged packet
  EmpiricalDistribution latency_slots;
  std::vector<DeliveryRecord> records;  // populated when keep_records

  double tx_per_delivered() const;
  double empirical_attempt_failure() const;
};

struct ExperimentResult {
  std::vector<ModeResult> modes;
  const ModeResult* find(Mode mode) const;
};

// Closed-form HARQ latency at an outage target: per-slot joint failure
// q = p^links, n the smallest attempt count with q^n <= target, latency
// 1 + (n-1)*rtt slots. Returns -1 when no finite latency reaches the target.
std::int64_t analytic_outage_latency_slots(double link_failure_prob, int link_count,
                                           double target_prob, int harq_rtt_slots);

// Expected transmissions per delivered packet without discard: k/(1-p).
double analytic_tx_per_delivered(double link_failure_prob, int link_count);

// One mode's duplication pipeline wired onto a Simulator. Per-(node, seq)
// SNR draws come from forked substreams keyed independently of the mode, so
// runs of different modes under one master seed are coupled sample-by-sample.
class DuplicationSim {
 public:
  DuplicationSim(Simulator& sim, const Config& cfg, Mode mode);

  // Buffers the packet per the mode's duplication rule; first transmission
  // goes out the slot after arrival. seq values must arrive in order.
  void enqueue_packet(std::int64_t seq, Slot arrival_slot);

  // Duplication status report landing at `node`: discards the copy if still
  // buffered, cancels a pending retransmission; no-op when already gone.
  void on_status_report(int node, std::int64_t seq);

  std::vector<std::int64_t> buffered_seqs(int node) const;
  const std::vector<DeliveryRecord>& records() const { return records_; }
  std::vector<DeliveryRecord> take_records() { return std::move(records_); }

  std::int64_t delivered() const { return delivered_; }
  std::uint64_t transmissions() const { return transmissions_; }
  std::uint64_t failed_attempts() const { return failed_attempts_; }
  std::uint64_t reports_emitted() const { return reports_emitted_; }
  const EmpiricalDistribution& latency_slots() const { return latency_slots_; }
  EmpiricalDistribution take_latency() { return std::move(latency_slots_); }

 private:
  struct Copy {
    std::int64_t seq;
    bool dup_flag;
    RngStream draws;
    Slot next_tx_slot = -1;  // slot of the outstanding tx event, -1 if none
  };
  struct Node {
    std::deque<Copy> queue;
    RngStream link_base;
  };

  void schedule_tx(int node, Slot slot);
  void transmit(int node, std::int64_t seq, Slot slot);
  void deliver(int node, std::int64_t seq, Slot slot);
  void pop_head(int node, Slot now);

  Simulator& sim_;
  const Config& cfg_;
  Mode mode_;
  int active_nodes_;
  std::vector<Node> nodes_;
  std::vector<DeliveryRecord> records_;
  EmpiricalDistribution latency_slots_;
  std::int64_t delivered_ = 0;
  std::uint64_t transmissions_ = 0;
  std::uint64_t failed_attempts_ = 0;
  std::uint64_t reports_emitted_ = 0;
};

ExperimentResult run_experiment(const Config& cfg, std::uint64_t master_seed);

}  // namespace mcasim::dupstat
