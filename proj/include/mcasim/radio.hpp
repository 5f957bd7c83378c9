// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include "mcasim/rng.hpp"

namespace mcasim {

double db_to_linear(double db);
double linear_to_db(double lin);

enum class Fading {
  None,      // degenerate: instantaneous SNR equals the mean
  Rayleigh,  // block fading, i.i.d. per slot; SNR exponential around the mean
};

struct LinkModel {
  double mean_snr_db = 10.0;
  double target_snr_db = 0.0;
  Fading fading = Fading::Rayleigh;

  double mean_snr_linear() const { return db_to_linear(mean_snr_db); }
  double target_snr_linear() const { return db_to_linear(target_snr_db); }

  // Closed-form per-attempt decode failure probability:
  // Rayleigh gives 1 - exp(-target/mean); "none" is a 0/1 step.
  double outage_probability() const;
};

// Instantaneous linear SNR for one slot on this link.
double draw_snr(const LinkModel& link, RngStream& rng);

// Threshold decode: success iff snr >= target (boundary inclusive).
bool decode_outcome(double snr_linear, double target_linear);

// log-distance pathloss with a minimum coupling loss floor. Distances in
// meters; the slope applies per decade of km (3GPP-style urban defaults).
struct PathlossModel {
  double intercept_db = 128.1;
  double slope_db_per_decade = 37.6;
  double min_coupling_loss_db = 70.0;

  double operator()(double distance_m) const;

  static PathlossModel macro() { return {128.1, 37.6, 70.0}; }
  static PathlossModel small_cell() { return {140.7, 36.7, 45.0}; }
};

double rsrp_dbm(double tx_power_dbm, double pathloss_db);

// LTE-style quality proxy: RSRP over total received power on the carrier.
// total_rx must include the measured cell's contribution, so the result is
// always <= 0 dB.
double rsrq_db(double rsrp_linear, double total_rx_linear);

// bandwidth_hz * log2(1 + sinr), bit/s. bandwidth must be > 0.
double shannon_rate(double sinr_linear, double bandwidth_hz);

// Thermal noise power (-174 dBm/Hz) plus a receiver noise figure.
double noise_power_dbm(double bandwidth_hz, double noise_figure_db);

}  // namespace mcasim
