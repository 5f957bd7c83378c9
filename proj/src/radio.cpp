// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#include "mcasim/radio.hpp"

#include <cmath>
#include <stdexcept>

namespace mcasim {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

double LinkModel::outage_probability() const {
  const double t = target_snr_linear();
  const double m = mean_snr_linear();
  switch (fading) {
    case Fading::None:
      return m >= t ? 0.0 : 1.0;
    case Fading::Rayleigh:
      return 1.0 - std::exp(-t / m);
  }
  return 1.0;
}

double draw_snr(const LinkModel& link, RngStream& rng) {
  switch (link.fading) {
    case Fading::None:
      return link.mean_snr_linear();
    case Fading::Rayleigh:
      return rng.exponential(link.mean_snr_linear());
  }
  return 0.0;
}

bool decode_outcome(double snr_linear, double target_linear) {
  return snr_linear >= target_linear;
}

double PathlossModel::operator()(double distance_m) const {
  if (!(distance_m > 0.0))
    throw std::invalid_argument("pathloss: distance must be > 0");
  const double pl = intercept_db + slope_db_per_decade * std::log10(distance_m / 1000.0);
  return pl > min_coupling_loss_db ? pl : min_coupling_loss_db;
}

double rsrp_dbm(double tx_power_dbm, double pathloss_db) {
  return tx_power_dbm - pathloss_db;
}

double rsrq_db(double rsrp_linear, double total_rx_linear) {
  if (!(rsrp_linear > 0.0))
    throw std::invalid_argument("rsrq: rsrp must be > 0");
  if (total_rx_linear < rsrp_linear)
    throw std::invalid_argument("rsrq: total received power must include the measured cell");
  return linear_to_db(rsrp_linear / total_rx_linear);
}

double shannon_rate(double sinr_linear, double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0))
    throw std::invalid_argument("shannon_rate: bandwidth must be > 0");
  if (sinr_linear < 0.0)
    throw std::invalid_argument("shannon_rate: sinr must be >= 0");
  return bandwidth_hz * std::log2(1.0 + sinr_linear);
}

double noise_power_dbm(double bandwidth_hz, double noise_figure_db) {
  if (!(bandwidth_hz > 0.0))
    throw std::invalid_argument("noise_power: bandwidth must be > 0");
  return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

}  // namespace mcasim
