// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "mcasim/engine.hpp"
#include "mcasim/metrics.hpp"
#include "mcasim/radio.hpp"

namespace mcasim::compcoord {

enum class UserClass { LowLatency, LatencyTolerant };
enum class Direction { Downlink, Uplink };

struct UserProfile {
  UserClass cls = UserClass::LowLatency;
  Direction dir = Direction::Downlink;
};

enum class Scheme {
  ScBaseline,
  DualConnectivity,
  JointTransmission,
  InterferenceCancellation,
};

const char* scheme_name(Scheme s);
const char* class_name(UserClass c);

struct CooperationDecision {
  Scheme scheme = Scheme::ScBaseline;
  // DC names exactly one beneficiary user (0 or 1); JT/IC involve both (-1).
  int beneficiary = -1;
};

// Case table for two users attached to the two cooperating gNBs:
// same direction and {LLU, LTU} -> DC to the LLU; {LTU, LTU} -> DC to a
// uniformly random pick; {LLU, LLU} -> non-coherent JT; cross-directional
// traffic -> IC-CoMP. `pick` feeds only the random-pick case.
CooperationDecision decide_cooperation(const UserProfile& a, const UserProfile& b,
                                       RngStream& pick);

struct TwoWayExchange {
  Slot first_tx_slot = 0;
  Slot ack_rx_slot = 0;
  int attempts = 0;
  Slot latency_slots() const { return ack_rx_slot - first_tx_slot + 1; }
};

struct Config {
  LinkModel link{0.0, 0.0, Fading::Rayleigh};  // cell-edge operating point
  double p_low_latency = 0.5;
  double p_downlink = 0.5;
  // Cross-transmission interference-to-signal mean power ratio, linear.
  // 1.0 = equal power (the default geometry), 0 disables interference.
  double interference_ratio = 1.0;
  double ic_residual = 0.0;  // fraction left after cancellation
  int xn_delay_slots = 0;
  std::int64_t episodes = 200'000;

  void validate() const;
};

// Per-link SNR draws for one user's exchange. Streams are forked per
// (episode, user), so the cooperative and baseline passes replay identical
// fading when handed copies of the same streams.
struct UserLinkDraws {
  RngStream serving;   // link to the user's own gNB
  RngStream assisting; // link to the cooperating gNB
  RngStream interference;
};

// Iterates (data slot, feedback slot) rounds until the first ACK. The
// success model per attempt follows the scheme: SC decodes the serving link
// alone; DC succeeds when either link decodes; JT decodes on the sum of both
// received powers; IC removes all but `ic_residual` of the cross-link
// interference. `interfered` marks legs that see a concurrent cross
// transmission. Returns the exchange with latency 2 * attempts (+ Xn delay
// via `start_slot`).
TwoWayExchange simulate_two_way(Scheme scheme, const Config& cfg, UserLinkDraws& draws,
                                bool interfered, Slot start_slot = 1);

struct SchemeClassStats {
  EmpiricalDistribution cooperative;
  EmpiricalDistribution baseline;  // same users, SC rules, coupled draws
};

struct ExperimentResult {
  // Indexed [scheme][class]; ScBaseline rows stay empty.
  std::array<std::array<SchemeClassStats, 2>, 4> by_scheme_class;
  EmpiricalDistribution cooperative_llu, baseline_llu;
  EmpiricalDistribution cooperative_ltu, baseline_ltu;
  std::int64_t episodes = 0;
  std::int64_t dc_random_picks_user0 = 0;
  std::int64_t dc_random_picks = 0;

  double llu_latency_reduction() const;
};

ExperimentResult run_experiment(const Config& cfg, std::uint64_t master_seed);

}  // namespace mcasim::compcoord
