// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#include "mcasim/compcoord.hpp"

#include <cmath>

#include "mcasim/errors.hpp"

namespace mcasim::compcoord {

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::ScBaseline: return "sc_baseline";
    case Scheme::DualConnectivity: return "dc";
    case Scheme::JointTransmission: return "jt_comp";
    case Scheme::InterferenceCancellation: return "ic_comp";
  }
  return "?";
}

const char* class_name(UserClass c) {
  return c == UserClass::LowLatency ? "llu" : "ltu";
}

void Config::validate() const {
  if (!(p_low_latency >= 0.0 && p_low_latency <= 1.0))
    throw ConfigError("compcoord.p_low_latency: must be in [0, 1]");
  if (!(p_downlink >= 0.0 && p_downlink <= 1.0))
    throw ConfigError("compcoord.p_downlink: must be in [0, 1]");
  if (!(interference_ratio >= 0.0))
    throw ConfigError("compcoord.interference_ratio: must be >= 0");
  if (!(ic_residual >= 0.0 && ic_residual <= 1.0))
    throw ConfigError("compcoord.ic_residual: must be in [0, 1]");
  if (xn_delay_slots < 0) throw ConfigError("compcoord.xn_delay_slots: must be >= 0");
  if (episodes < 1) throw ConfigError("compcoord.episodes: must be >= 1");
  if (link.fading == Fading::None) {
    // Degenerate fading must still be able to decode on the worst leg, or
    // exchanges never terminate.
    const double m = link.mean_snr_linear();
    const double t = link.target_snr_linear();
    const double imean = interference_ratio * m;
    if (m < t * (1.0 + imean))
      throw ConfigError("compcoord.link: degenerate fading cannot decode an interfered leg");
  }
}

CooperationDecision decide_cooperation(const UserProfile& a, const UserProfile& b,
                                       RngStream& pick) {
  if (a.dir != b.dir) return CooperationDecision{Scheme::InterferenceCancellation, -1};
  const bool a_ll = a.cls == UserClass::LowLatency;
  const bool b_ll = b.cls == UserClass::LowLatency;
  if (a_ll && b_ll) return CooperationDecision{Scheme::JointTransmission, -1};
  if (a_ll) return CooperationDecision{Scheme::DualConnectivity, 0};
  if (b_ll) return CooperationDecision{Scheme::DualConnectivity, 1};
  // Both latency tolerant: drain one buffer quickly via a uniform pick.
  return CooperationDecision{Scheme::DualConnectivity, pick.bernoulli(0.5) ? 0 : 1};
}

TwoWayExchange simulate_two_way(Scheme scheme, const Config& cfg, UserLinkDraws& draws,
                                bool interfered, Slot start_slot) {
  const double target = cfg.link.target_snr_linear();
  const double imean = interfered ? cfg.interference_ratio * cfg.link.mean_snr_linear() : 0.0;

  TwoWayExchange ex;
  ex.first_tx_slot = start_slot;
  for (int attempt = 1;; ++attempt) {
    if (attempt > 1'000'000)
      throw SimulationError("two-way exchange did not complete within 1e6 attempts");
    bool success = false;
    switch (scheme) {
      case Scheme::ScBaseline: {
        const double s = draw_snr(cfg.link, draws.serving);
        double i = 0.0;
        if (imean > 0.0)
          i = cfg.link.fading == Fading::Rayleigh ? draws.interference.exponential(imean)
                                                  : imean;
        success = decode_outcome(s, target * (1.0 + i));
        break;
      }
      case Scheme::DualConnectivity: {
        // The partner defers, so both legs are clean; first decoded copy wins.
        const double s = draw_snr(cfg.link, draws.serving);
        const double a = draw_snr(cfg.link, draws.assisting);
        success = decode_outcome(s, target) || decode_outcome(a, target);
        break;
      }
      case Scheme::JointTransmission: {
        // Non-coherent JT: received powers add, no phase-alignment gain.
        const double s = draw_snr(cfg.link, draws.serving);
        const double a = draw_snr(cfg.link, draws.assisting);
        success = decode_outcome(s + a, target);
        break;
      }
      case Scheme::InterferenceCancellation: {
        const double s = draw_snr(cfg.link, draws.serving);
        double i = 0.0;
        if (imean > 0.0) {
          i = cfg.link.fading == Fading::Rayleigh ? draws.interference.exponential(imean)
                                                  : imean;
          i *= cfg.ic_residual;  // Xn-known cross signal removed up to a residual
        }
        success = decode_outcome(s, target * (1.0 + i));
        break;
      }
    }
    if (success) {
      ex.attempts = attempt;
      // Attempt n occupies the data slot start+2(n-1); the ACK lands in the
      // following (error-free) feedback slot.
      ex.ack_rx_slot = start_slot + 2 * (attempt - 1) + 1;
      return ex;
    }
  }
}

double ExperimentResult::llu_latency_reduction() const {
  if (baseline_llu.empty() || cooperative_llu.empty()) return 0.0;
  return 1.0 - cooperative_llu.mean() / baseline_llu.mean();
}

ExperimentResult run_experiment(const Config& cfg, std::uint64_t master_seed) {
  cfg.validate();
  RngStream profiles(master_seed, "compcoord:profiles");
  RngStream picks(master_seed, "compcoord:picks");
  RngStream links(master_seed, "compcoord:links");

  ExperimentResult res;
  res.episodes = cfg.episodes;

  auto record = [&](Scheme scheme, UserClass cls, double coop_latency,
                    double base_latency) {
    auto& slot = res.by_scheme_class[static_cast<std::size_t>(scheme)]
                                    [cls == UserClass::LowLatency ? 0 : 1];
    slot.cooperative.add(coop_latency);
    slot.baseline.add(base_latency);
    if (cls == UserClass::LowLatency) {
      res.cooperative_llu.add(coop_latency);
      res.baseline_llu.add(base_latency);
    } else {
      res.cooperative_ltu.add(coop_latency);
      res.baseline_ltu.add(base_latency);
    }
  };

  for (std::int64_t e = 0; e < cfg.episodes; ++e) {
    RngStream prof = profiles.fork(static_cast<std::uint64_t>(e));
    UserProfile users[2];
    for (auto& u : users) {
      u.cls = prof.bernoulli(cfg.p_low_latency) ? UserClass::LowLatency
                                                : UserClass::LatencyTolerant;
      u.dir = prof.bernoulli(cfg.p_downlink) ? Direction::Downlink : Direction::Uplink;
    }
    RngStream pick = picks.fork(static_cast<std::uint64_t>(e));
    const CooperationDecision dec = decide_cooperation(users[0], users[1], pick);
    if (dec.scheme == Scheme::DualConnectivity && users[0].cls == users[1].cls) {
      ++res.dc_random_picks;
      if (dec.beneficiary == 0) ++res.dc_random_picks_user0;
    }

    RngStream base = links.fork(static_cast<std::uint64_t>(e));
    UserLinkDraws draws[2] = {
        {base.fork(0), base.fork(1), base.fork(2)},
        {base.fork(3), base.fork(4), base.fork(5)},
    };
    // Copies replay the same fading for the baseline pass.
    UserLinkDraws base_draws[2] = {draws[0], draws[1]};

    const bool same_dir = users[0].dir == users[1].dir;
    // Without coordination both users transmit at once: same-direction legs
    // interfere mutually; in cross traffic the uplink reception suffers the
    // neighbour's downlink (UE-to-UE coupling is neglected).
    double base_latency[2];
    for (int u = 0; u < 2; ++u) {
      const bool interfered = same_dir || users[u].dir == Direction::Uplink;
      base_latency[u] = static_cast<double>(
          simulate_two_way(Scheme::ScBaseline, cfg, base_draws[u], interfered).latency_slots());
    }

    const Slot coop_start = 1 + cfg.xn_delay_slots;
    switch (dec.scheme) {
      case Scheme::DualConnectivity: {
        const int w = dec.beneficiary;
        const int p = 1 - w;
        const TwoWayExchange wx =
            simulate_two_way(Scheme::DualConnectivity, cfg, draws[w], false, coop_start);
        const double w_completion =
            static_cast<double>(wx.latency_slots() + cfg.xn_delay_slots);
        record(Scheme::DualConnectivity, users[w].cls, w_completion, base_latency[w]);
        // Deferred partner: transmits alone (clean) after the winner's ACK;
        // its recorded number includes the deferral penalty.
        const TwoWayExchange px = simulate_two_way(Scheme::ScBaseline, cfg, draws[p], false,
                                                   wx.ack_rx_slot + 1);
        record(Scheme::DualConnectivity, users[p].cls,
               w_completion + static_cast<double>(px.latency_slots()), base_latency[p]);
        break;
      }
      case Scheme::JointTransmission: {
        for (int u = 0; u < 2; ++u) {
          const TwoWayExchange ex =
              simulate_two_way(Scheme::JointTransmission, cfg, draws[u], false, coop_start);
          record(Scheme::JointTransmission, users[u].cls,
                 static_cast<double>(ex.latency_slots() + cfg.xn_delay_slots),
                 base_latency[u]);
        }
        break;
      }
      case Scheme::InterferenceCancellation: {
        for (int u = 0; u < 2; ++u) {
          const bool interfered = users[u].dir == Direction::Uplink;
          const TwoWayExchange ex = simulate_two_way(Scheme::InterferenceCancellation, cfg,
                                                     draws[u], interfered, coop_start);
          record(Scheme::InterferenceCancellation, users[u].cls,
                 static_cast<double>(ex.latency_slots() + cfg.xn_delay_slots),
                 base_latency[u]);
        }
        break;
      }
      case Scheme::ScBaseline:
        break;  // never decided
    }
  }
  return res;
}

}  // namespace mcasim::compcoord
