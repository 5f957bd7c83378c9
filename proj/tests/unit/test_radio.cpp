// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mcasim/radio.hpp"
#include "mcasim/rng.hpp"

using namespace mcasim;

TEST_CASE("db/linear conversions round-trip") {
  CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
  CHECK(db_to_linear(0.0) == doctest::Approx(1.0));
  CHECK(linear_to_db(100.0) == doctest::Approx(20.0));
}

TEST_CASE("rayleigh draw has the configured linear mean") {
  LinkModel link{10.0, 0.0, Fading::Rayleigh};
  RngStream rng(21, "snr");
  const int n = 1'000'000;
  double sum = 0;
  for (int i = 0; i < n; ++i) sum += draw_snr(link, rng);
  CHECK(sum / n == doctest::Approx(10.0).epsilon(0.01));
}

TEST_CASE("degenerate fading returns the mean every time") {
  LinkModel link{10.0, 0.0, Fading::None};
  RngStream rng(21, "snr");
  for (int i = 0; i < 10; ++i) CHECK(draw_snr(link, rng) == db_to_linear(10.0));
}

TEST_CASE("rayleigh outage matches the closed form 1 - exp(-t/m)") {
  LinkModel link{10.0, 0.0, Fading::Rayleigh};
  const double analytic = 1.0 - std::exp(-0.1);
  CHECK(link.outage_probability() == doctest::Approx(analytic).epsilon(1e-12));

  // Monte-Carlo cross-check of the same quantity through decode_outcome.
  RngStream rng(33, "outage");
  const int n = 1'000'000;
  int failures = 0;
  const double target = link.target_snr_linear();
  for (int i = 0; i < n; ++i)
    if (!decode_outcome(draw_snr(link, rng), target)) ++failures;
  const double p_hat = static_cast<double>(failures) / n;
  CHECK(std::fabs(p_hat - analytic) < 0.001);
}

TEST_CASE("decode is inclusive at the boundary and fails at zero snr") {
  CHECK(decode_outcome(1.0, 1.0));
  CHECK_FALSE(decode_outcome(0.0, 1.0));
}

TEST_CASE("pathloss grows with distance and respects the MCL floor") {
  const PathlossModel macro = PathlossModel::macro();
  CHECK(macro(1000.0) == doctest::Approx(128.1));
  CHECK(macro(2000.0) > macro(1000.0));
  CHECK(macro(1.0) == doctest::Approx(70.0));  // floored
  CHECK_THROWS_AS(macro(0.0), std::invalid_argument);
  const PathlossModel small = PathlossModel::small_cell();
  CHECK(small(1000.0) == doctest::Approx(140.7));
}

TEST_CASE("rsrp is transmit power minus pathloss") {
  CHECK(rsrp_dbm(46.0, 100.0) == doctest::Approx(-54.0));
}

TEST_CASE("rsrq is non-positive and monotone in total received power") {
  const double rsrp = db_to_linear(-80.0);
  CHECK(rsrq_db(rsrp, rsrp) == doctest::Approx(0.0));
  const double q1 = rsrq_db(rsrp, rsrp * 2.0);
  const double q2 = rsrq_db(rsrp, rsrp * 4.0);
  CHECK(q1 < 0.0);
  CHECK(q2 < q1);
  CHECK_THROWS_AS(rsrq_db(rsrp, rsrp * 0.5), std::invalid_argument);
}

TEST_CASE("shannon rate examples and monotonicity") {
  CHECK(shannon_rate(0.0, 1.4e6) == doctest::Approx(0.0));
  CHECK(shannon_rate(1.0, 1.4e6) == doctest::Approx(1.4e6));
  CHECK(shannon_rate(3.0, 1.0e6) == doctest::Approx(2.0e6));
  CHECK(shannon_rate(2.0, 1.4e6) > shannon_rate(1.0, 1.4e6));
  CHECK(shannon_rate(1.0, 2.0e6) > shannon_rate(1.0, 1.4e6));
  CHECK_THROWS_AS(shannon_rate(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(shannon_rate(-0.5, 1.0e6), std::invalid_argument);
}

TEST_CASE("noise power follows bandwidth") {
  const double n1 = noise_power_dbm(1.4e6, 9.0);
  const double n2 = noise_power_dbm(14e6, 9.0);
  CHECK(n2 - n1 == doctest::Approx(10.0));
}
