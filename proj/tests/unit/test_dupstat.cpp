// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#include <doctest.h>

#include <cmath>
#include <map>

#include "mcasim/dupstat.hpp"

using namespace mcasim;
using namespace mcasim::dupstat;

namespace {

Config small_config(std::int64_t packets) {
  Config cfg;
  cfg.packet_count = packets;
  cfg.keep_records = true;
  return cfg;
}

// Deterministic all-fail link: degenerate fading below the target. Only
// run_experiment validates configs, so the pipeline itself can be driven
// into the retransmission path deterministically.
Config all_fail_config() {
  Config cfg;
  cfg.link = LinkModel{-10.0, 0.0, Fading::None};
  return cfg;
}

Config all_pass_config() {
  Config cfg;
  cfg.link = LinkModel{10.0, 0.0, Fading::None};
  return cfg;
}

}  // namespace

TEST_CASE("enqueue buffers one copy per duplication-set node in MC, macro only in SC") {
  Config cfg = small_config(1);
  Simulator sim_mc(1);
  DuplicationSim mc(sim_mc, cfg, Mode::MultiConnectivity);
  mc.enqueue_packet(0, 0);
  CHECK(mc.buffered_seqs(0) == std::vector<std::int64_t>{0});
  CHECK(mc.buffered_seqs(1) == std::vector<std::int64_t>{0});

  Simulator sim_sc(1);
  DuplicationSim sc(sim_sc, cfg, Mode::SingleConnectivity);
  sc.enqueue_packet(0, 0);
  CHECK(sc.buffered_seqs(0) == std::vector<std::int64_t>{0});
  CHECK(sc.buffered_seqs(1).empty());
}

TEST_CASE("100 arrivals buffer 200 copies in MC and 100 in SC") {
  Config cfg = all_fail_config();  // nothing drains without transmissions
  Simulator sim_mc(1), sim_sc(1);
  DuplicationSim mc(sim_mc, cfg, Mode::MultiConnectivity);
  DuplicationSim sc(sim_sc, cfg, Mode::SingleConnectivity);
  for (int i = 0; i < 100; ++i) {
    mc.enqueue_packet(i, 0);
    sc.enqueue_packet(i, 0);
  }
  CHECK(mc.buffered_seqs(0).size() + mc.buffered_seqs(1).size() == 200);
  CHECK(sc.buffered_seqs(0).size() + sc.buffered_seqs(1).size() == 100);
}

TEST_CASE("duplicate seq is rejected") {
  Config cfg = small_config(2);
  Simulator sim(1);
  DuplicationSim dup(sim, cfg, Mode::MultiConnectivity);
  dup.enqueue_packet(0, 0);
  CHECK_THROWS_AS(dup.enqueue_packet(0, 1), SimulationError);
}

TEST_CASE("success delivers the slot after arrival; failure schedules a retransmission") {
  SUBCASE("clean link") {
    Config cfg = all_pass_config();
    Simulator sim(1);
    DuplicationSim dup(sim, cfg, Mode::SingleConnectivity);
    dup.enqueue_packet(0, 0);
    sim.run_until(1);
    CHECK(dup.records()[0].first_success_slot == 1);
    CHECK(dup.records()[0].total_transmissions == 1);
    CHECK(dup.buffered_seqs(0).empty());
  }
  SUBCASE("failing link retransmits one HARQ RTT later") {
    Config cfg = all_fail_config();
    Simulator sim(1);
    DuplicationSim dup(sim, cfg, Mode::SingleConnectivity);
    dup.enqueue_packet(0, 0);
    sim.run_until(1);
    CHECK(dup.records()[0].total_transmissions == 1);
    sim.run_until(4);  // nothing due before the RTT elapses
    CHECK(dup.records()[0].total_transmissions == 1);
    sim.run_until(5);
    CHECK(dup.records()[0].total_transmissions == 2);
    CHECK(dup.failed_attempts() == 2);
  }
}

TEST_CASE("status report discards an unsent copy with zero transmissions charged") {
  Config cfg = all_fail_config();
  Simulator sim(1);
  DuplicationSim dup(sim, cfg, Mode::MultiConnectivityDiscard);
  dup.enqueue_packet(0, 0);
  dup.on_status_report(1, 0);  // before any transmission
  CHECK(dup.buffered_seqs(1).empty());
  sim.run_until(1);
  CHECK(dup.transmissions() == 1);  // node 0 only
}

TEST_CASE("status report cancels a pending retransmission but keeps past attempts counted") {
  Config cfg = all_fail_config();
  Simulator sim(1);
  DuplicationSim dup(sim, cfg, Mode::MultiConnectivityDiscard);
  dup.enqueue_packet(0, 0);
  sim.run_until(1);  // both nodes fail once; retx due at slot 5
  CHECK(dup.transmissions() == 2);
  dup.on_status_report(1, 0);
  CHECK(dup.buffered_seqs(1).empty());
  sim.run_until(9);
  // node 0 kept retransmitting at 5 and 9; node 1 stayed silent.
  CHECK(dup.records()[0].total_transmissions == 4);
}

TEST_CASE("status report for an unknown seq is a no-op") {
  Config cfg = all_fail_config();
  Simulator sim(1);
  DuplicationSim dup(sim, cfg, Mode::MultiConnectivityDiscard);
  dup.enqueue_packet(0, 0);
  dup.on_status_report(0, 99);
  dup.on_status_report(1, 99);
  CHECK(dup.buffered_seqs(0) == std::vector<std::int64_t>{0});
  CHECK(dup.buffered_seqs(1) == std::vector<std::int64_t>{0});
}

TEST_CASE("queued packets are served FIFO after the head drains") {
  Config cfg = all_pass_config();
  Simulator sim(1);
  DuplicationSim dup(sim, cfg, Mode::SingleConnectivity);
  dup.enqueue_packet(0, 0);
  dup.enqueue_packet(1, 0);  // queued behind seq 0
  sim.run_until_empty();
  CHECK(dup.records()[0].first_success_slot == 1);
  CHECK(dup.records()[1].first_success_slot == 2);
}

TEST_CASE("closed-form outage latency: 17 slots SC and 9 slots MC at defaults") {
  const double p = 1.0 - std::exp(-0.1);
  CHECK(analytic_outage_latency_slots(p, 1, 1e-5, 4) == 17);
  CHECK(analytic_outage_latency_slots(p, 2, 1e-5, 4) == 9);
  CHECK(analytic_outage_latency_slots(p, 1, 1e-3, 4) == 9);  // n=3
  CHECK(analytic_outage_latency_slots(1.0, 1, 1e-3, 4) == -1);
  CHECK(analytic_tx_per_delivered(p, 1) == doctest::Approx(1.0 / (1.0 - p)));
  CHECK(analytic_tx_per_delivered(p, 2) == doctest::Approx(2.0 / (1.0 - p)));
}

TEST_CASE("experiment reproduces the per-attempt failure probability") {
  Config cfg = small_config(50'000);
  cfg.keep_records = false;
  cfg.modes = {Mode::SingleConnectivity};
  const auto res = run_experiment(cfg, 42);
  const double p = cfg.link.outage_probability();
  // ~55k attempts; 3 sigma on the failure fraction is ~0.004.
  CHECK(std::fabs(res.modes[0].empirical_attempt_failure() - p) < 0.005);
}

TEST_CASE("coupled-stream invariants across modes") {
  Config cfg = small_config(20'000);
  const auto res = run_experiment(cfg, 7);
  const ModeResult* sc = res.find(Mode::SingleConnectivity);
  const ModeResult* mc = res.find(Mode::MultiConnectivity);
  const ModeResult* mcd = res.find(Mode::MultiConnectivityDiscard);
  REQUIRE(sc);
  REQUIRE(mc);
  REQUIRE(mcd);
  REQUIRE(sc->records.size() == 20'000);
  REQUIRE(mc->records.size() == 20'000);
  REQUIRE(mcd->records.size() == 20'000);

  bool any_strictly_fewer = false;
  for (std::size_t i = 0; i < mc->records.size(); ++i) {
    // First delivery preserved exactly between MC and MC with discard.
    CHECK(mc->records[i].first_success_slot == mcd->records[i].first_success_slot);
    // Discard never transmits more.
    CHECK(mcd->records[i].total_transmissions <= mc->records[i].total_transmissions);
    if (mcd->records[i].total_transmissions < mc->records[i].total_transmissions)
      any_strictly_fewer = true;
    // MC delivers no later than SC on the shared macro draws.
    const auto lat = [](const DeliveryRecord& r) {
      return r.first_success_slot - r.arrival_slot;
    };
    CHECK(lat(mc->records[i]) <= lat(sc->records[i]));
    // Latencies live on the slot grid 1 + (n-1)*rtt.
    CHECK((lat(sc->records[i]) - 1) % 4 == 0);
  }
  CHECK(any_strictly_fewer);

  CHECK(sc->reports_emitted == 0);
  CHECK(mc->reports_emitted == 0);
  CHECK(mcd->reports_emitted == static_cast<std::uint64_t>(mcd->delivered));
  CHECK(mcd->delivered == 20'000);

  // Transmission efficiency ordering: SC < MCD < MC on averages.
  CHECK(sc->tx_per_delivered() < mcd->tx_per_delivered());
  CHECK(mcd->tx_per_delivered() < mc->tx_per_delivered());
}

TEST_CASE("identical seeds reproduce identical experiment results") {
  Config cfg = small_config(2'000);
  const auto r1 = run_experiment(cfg, 11);
  const auto r2 = run_experiment(cfg, 11);
  for (std::size_t m = 0; m < r1.modes.size(); ++m) {
    CHECK(r1.modes[m].transmissions == r2.modes[m].transmissions);
    REQUIRE(r1.modes[m].records.size() == r2.modes[m].records.size());
    for (std::size_t i = 0; i < r1.modes[m].records.size(); ++i) {
      CHECK(r1.modes[m].records[i].first_success_slot ==
            r2.modes[m].records[i].first_success_slot);
    }
  }
}

TEST_CASE("poisson arrivals queue FIFO and still deliver everything") {
  Config cfg = small_config(3'000);
  cfg.arrivals = Config::Arrivals::Poisson;
  cfg.poisson_rate_per_slot = 0.5;  // heavy enough to queue
  const auto res = run_experiment(cfg, 13);
  for (const auto& m : res.modes) {
    CHECK(m.delivered == 3'000);
    Slot prev_arrival = -1;
    for (const auto& r : m.records) {
      CHECK(r.arrival_slot >= prev_arrival);
      prev_arrival = r.arrival_slot;
      CHECK(r.first_success_slot >= r.arrival_slot + 1);
    }
  }
  // Discard relieves queueing: mean latency should not be worse than MC.
  const ModeResult* mc = res.find(Mode::MultiConnectivity);
  const ModeResult* mcd = res.find(Mode::MultiConnectivityDiscard);
  CHECK(mcd->latency_slots.mean() <= mc->latency_slots.mean() + 1e-9);
}

TEST_CASE("config validation rejects broken parameters") {
  Config cfg;
  cfg.harq_rtt_slots = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = Config{};
  cfg.outage_target = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = Config{};
  cfg.duplication_set_size = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = Config{};
  cfg.link = LinkModel{-10.0, 0.0, Fading::None};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
