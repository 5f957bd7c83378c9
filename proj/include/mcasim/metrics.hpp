// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace mcasim {

// Streaming sample accumulator answering percentile / CCDF / outage queries.
//
// Samples are stored exactly (sorted on demand) up to `exact_cap`, after
// which the store degrades to a fixed-count histogram. Histogram bins have a
// power-of-two width and are aligned to multiples of that width, so merging
// and range expansion re-bin exactly and the result of merge(A, B) is
// independent of argument order.
class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::size_t exact_cap = 10'000'000,
                                 std::size_t histogram_bins = 10'000);

  void add(double value);
  void merge(const EmpiricalDistribution& other);

  std::size_t count() const { return count_; }
  bool empty() const { return count_ == 0; }
  bool exact() const { return histogram_width_ == 0.0; }

  double min() const;
  double max() const;
  double mean() const;

  // Linear-interpolation quantile between order statistics (the common
  // "inclusive" convention): rank q/100 * (count-1), q in [0, 100].
  double percentile(double q) const;

  struct OutageResult {
    double value = 0.0;
    // False when fewer than 10/target_prob samples back the estimate.
    bool reliable = true;
  };
  // Smallest sample value v with empirical P(X > v) <= target_prob.
  OutageResult outage(double target_prob) const;

  // Empirical P(X > x).
  double ccdf_at(double x) const;

  // (value, ccdf) pairs at the distinct sample values (bin edges once the
  // store is a histogram). max_points = 0 keeps every point; otherwise the
  // list is thinned evenly.
  std::vector<std::pair<double, double>> ccdf_points(std::size_t max_points = 0) const;

 private:
  void ensure_sorted() const;
  void convert_to_histogram(double required_lo, double required_hi);
  void widen_histogram(double required_lo, double required_hi, int min_exponent);
  static int width_exponent_for(double lo, double hi, std::size_t bins);
  std::int64_t bin_index(double v) const;
  void add_to_histogram(double v, std::uint64_t n);
  double order_statistic(double rank) const;  // 1-based, fractional

  std::size_t exact_cap_;
  std::size_t histogram_bins_;

  std::size_t count_ = 0;
  double min_ = 0.0, max_ = 0.0, sum_ = 0.0;

  mutable std::vector<double> samples_;  // exact mode
  mutable bool sorted_ = true;

  // Histogram mode (active when histogram_width_ > 0): counts_[i] covers
  // [ (first_bin_+i)*w, (first_bin_+i+1)*w ).
  double histogram_width_ = 0.0;
  int width_exponent_ = 0;
  std::int64_t first_bin_ = 0;
  std::vector<std::uint64_t> counts_;
};

// Named monotone counters; merge is componentwise sum. std::map keeps
// iteration order deterministic.
class CounterSet {
 public:
  void add(const std::string& name, std::uint64_t by = 1) { counters_[name] += by; }
  std::uint64_t get(const std::string& name) const;
  void merge(const CounterSet& other);
  const std::map<std::string, std::uint64_t>& all() const { return counters_; }

 private:
  std::map<std::string, std::uint64_t> counters_;
};

}  // namespace mcasim
