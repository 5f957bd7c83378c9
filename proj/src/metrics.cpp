// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#include "mcasim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mcasim {

EmpiricalDistribution::EmpiricalDistribution(std::size_t exact_cap,
                                             std::size_t histogram_bins)
    : exact_cap_(exact_cap), histogram_bins_(histogram_bins) {
  if (exact_cap_ == 0) exact_cap_ = 1;
  if (histogram_bins_ < 2) histogram_bins_ = 2;
}

void EmpiricalDistribution::add(double value) {
  if (!std::isfinite(value))
    throw std::invalid_argument("EmpiricalDistribution: sample must be finite");
  if (count_ == 0) {
    min_ = max_ = value;
  } else {
    min_ = std::min(min_, value);
    max_ = std::max(max_, value);
  }
  sum_ += value;
  ++count_;
  if (exact()) {
    samples_.push_back(value);
    sorted_ = false;
    if (samples_.size() > exact_cap_) convert_to_histogram(min_, max_);
    return;
  }
  add_to_histogram(value, 1);
}

void EmpiricalDistribution::ensure_sorted() const {
  if (!sorted_) {
    std::sort(samples_.begin(), samples_.end());
    sorted_ = true;
  }
}

// Smallest power-of-two width covering [lo, hi] with at most `bins` aligned
// bins. Exponent-based so equal inputs give identical grids everywhere.
int EmpiricalDistribution::width_exponent_for(double lo, double hi, std::size_t bins) {
  const double scale = std::max({std::fabs(lo), std::fabs(hi), 1e-300});
  int k = std::ilogb(scale) - 52;  // start near one ulp of the data scale
  for (;;) {
    const double w = std::ldexp(1.0, k);
    if (w > 0.0 && std::isfinite(w)) {
      const double span_bins =
          std::floor(hi / w) - std::floor(lo / w) + 1.0;
      if (span_bins <= static_cast<double>(bins)) return k;
    }
    ++k;
  }
}

std::int64_t EmpiricalDistribution::bin_index(double v) const {
  return static_cast<std::int64_t>(std::floor(v / histogram_width_));
}

void EmpiricalDistribution::convert_to_histogram(double required_lo, double required_hi) {
  width_exponent_ = width_exponent_for(required_lo, required_hi, histogram_bins_);
  histogram_width_ = std::ldexp(1.0, width_exponent_);
  first_bin_ = static_cast<std::int64_t>(std::floor(required_lo / histogram_width_));
  const std::int64_t last = static_cast<std::int64_t>(std::floor(required_hi / histogram_width_));
  counts_.assign(static_cast<std::size_t>(last - first_bin_ + 1), 0);
  for (double v : samples_) {
    counts_[static_cast<std::size_t>(bin_index(v) - first_bin_)] += 1;
  }
  samples_.clear();
  samples_.shrink_to_fit();
  sorted_ = true;
}

namespace {
// Floor division by 2^shift; exact for the bin-index range we produce.
std::int64_t floor_div_pow2(std::int64_t idx, int shift) {
  if (shift <= 0) return idx;
  if (shift >= 63) return idx < 0 ? -1 : 0;
  return idx >> shift;  // arithmetic shift == floor division in C++20
}
}  // namespace

void EmpiricalDistribution::widen_histogram(double required_lo, double required_hi,
                                            int min_exponent) {
  const double old_lo = static_cast<double>(first_bin_) * histogram_width_;
  const double old_hi =
      static_cast<double>(first_bin_ + static_cast<std::int64_t>(counts_.size())) *
          histogram_width_ -
      histogram_width_ / 2.0;
  const double lo = std::min(required_lo, old_lo);
  const double hi = std::max(required_hi, old_hi);
  const int k = std::max({width_exponent_, min_exponent,
                          width_exponent_for(lo, hi, histogram_bins_)});
  // Re-bin onto the coarser aligned grid: bin i at width 2^k0 maps exactly to
  // bin floor(i / 2^(k-k0)) at width 2^k.
  const int shift = k - width_exponent_;
  const double new_w = std::ldexp(1.0, k);
  std::int64_t lo_bin = std::min(floor_div_pow2(first_bin_, shift),
                                 static_cast<std::int64_t>(std::floor(required_lo / new_w)));
  std::int64_t hi_bin = static_cast<std::int64_t>(std::floor(required_hi / new_w));
  if (!counts_.empty()) {
    const std::int64_t old_last = first_bin_ + static_cast<std::int64_t>(counts_.size()) - 1;
    hi_bin = std::max(hi_bin, floor_div_pow2(old_last, shift));
  }
  std::vector<std::uint64_t> next(static_cast<std::size_t>(hi_bin - lo_bin + 1), 0);
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] == 0) continue;
    const std::int64_t new_idx =
        floor_div_pow2(first_bin_ + static_cast<std::int64_t>(i), shift);
    next[static_cast<std::size_t>(new_idx - lo_bin)] += counts_[i];
  }
  counts_ = std::move(next);
  first_bin_ = lo_bin;
  width_exponent_ = k;
  histogram_width_ = new_w;
}

void EmpiricalDistribution::add_to_histogram(double v, std::uint64_t n) {
  std::int64_t idx = bin_index(v);
  if (idx < first_bin_ || idx >= first_bin_ + static_cast<std::int64_t>(counts_.size())) {
    widen_histogram(std::min(v, min_), std::max(v, max_), width_exponent_);
    idx = bin_index(v);
  }
  counts_[static_cast<std::size_t>(idx - first_bin_)] += n;
}

void EmpiricalDistribution::merge(const EmpiricalDistribution& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    min_ = other.min_;
    max_ = other.max_;
  } else {
    min_ = std::min(min_, other.min_);
    max_ = std::max(max_, other.max_);
  }
  sum_ += other.sum_;
  count_ += other.count_;

  if (exact() && other.exact() && samples_.size() + other.samples_.size() <= exact_cap_) {
    samples_.insert(samples_.end(), other.samples_.begin(), other.samples_.end());
    sorted_ = false;
    return;
  }
  if (exact()) convert_to_histogram(min_, max_);
  // Re-bin onto one deterministic grid before ingesting: the final exponent
  // depends only on the combined extent and both operand widths, so the
  // merged result is independent of argument order.
  const int other_exp = other.exact() ? width_exponent_ : other.width_exponent_;
  widen_histogram(min_, max_, std::max(width_exponent_, other_exp));
  if (other.exact()) {
    for (double v : other.samples_) add_to_histogram(v, 1);
    return;
  }
  for (std::size_t i = 0; i < other.counts_.size(); ++i) {
    if (other.counts_[i] == 0) continue;
    const std::int64_t idx = other.first_bin_ + static_cast<std::int64_t>(i);
    // Representative value: bin midpoint on the other grid.
    const double v = (static_cast<double>(idx) + 0.5) * other.histogram_width_;
    add_to_histogram(v, other.counts_[i]);
  }
}

double EmpiricalDistribution::min() const {
  if (count_ == 0) throw std::invalid_argument("min: empty distribution");
  return min_;
}

double EmpiricalDistribution::max() const {
  if (count_ == 0) throw std::invalid_argument("max: empty distribution");
  return max_;
}

double EmpiricalDistribution::mean() const {
  if (count_ == 0) throw std::invalid_argument("mean: empty distribution");
  return sum_ / static_cast<double>(count_);
}

// Value of the (possibly fractional) r-th smallest sample, r in [1, count].
double EmpiricalDistribution::order_statistic(double rank) const {
  if (exact()) {
    ensure_sorted();
    const double pos = rank - 1.0;  // 0-based
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
    const double frac = pos - std::floor(pos);
    return samples_[lo] + (samples_[std::min(hi, samples_.size() - 1)] - samples_[lo]) * frac;
  }
  std::uint64_t seen = 0;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] == 0) continue;
    const double upto = static_cast<double>(seen + counts_[i]);
    if (rank <= upto) {
      const double lo = static_cast<double>(first_bin_ + static_cast<std::int64_t>(i)) *
                        histogram_width_;
      const double within = (rank - static_cast<double>(seen)) /
                            static_cast<double>(counts_[i]);
      return lo + histogram_width_ * within;
    }
    seen += counts_[i];
  }
  return static_cast<double>(first_bin_ + static_cast<std::int64_t>(counts_.size())) *
         histogram_width_;
}

double EmpiricalDistribution::percentile(double q) const {
  if (count_ == 0) throw std::invalid_argument("percentile: empty distribution");
  if (!(q >= 0.0 && q <= 100.0))
    throw std::invalid_argument("percentile: q must be in [0, 100]");
  const double rank = 1.0 + (q / 100.0) * static_cast<double>(count_ - 1);
  return order_statistic(rank);
}

EmpiricalDistribution::OutageResult EmpiricalDistribution::outage(double target_prob) const {
  if (count_ == 0) throw std::invalid_argument("outage: empty distribution");
  if (!(target_prob > 0.0 && target_prob <= 1.0))
    throw std::invalid_argument("outage: target probability must be in (0, 1]");
  OutageResult res;
  res.reliable = static_cast<double>(count_) >= 10.0 / target_prob;
  const double n = static_cast<double>(count_);
  if (exact()) {
    ensure_sorted();
    // Smallest k with (n - k)/n <= target; v = k-th smallest sample.
    std::size_t k = static_cast<std::size_t>(std::ceil(n * (1.0 - target_prob)));
    k = std::max<std::size_t>(k, 1);
    res.value = samples_[k - 1];
    return res;
  }
  std::uint64_t cum = 0;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    cum += counts_[i];
    if ((n - static_cast<double>(cum)) / n <= target_prob) {
      res.value = static_cast<double>(first_bin_ + static_cast<std::int64_t>(i) + 1) *
                  histogram_width_;
      return res;
    }
  }
  res.value = max_;
  return res;
}

double EmpiricalDistribution::ccdf_at(double x) const {
  if (count_ == 0) throw std::invalid_argument("ccdf: empty distribution");
  const double n = static_cast<double>(count_);
  if (exact()) {
    ensure_sorted();
    const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
    return static_cast<double>(samples_.end() - it) / n;
  }
  if (x < static_cast<double>(first_bin_) * histogram_width_) return 1.0;
  double above = 0.0;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    const double lo = static_cast<double>(first_bin_ + static_cast<std::int64_t>(i)) *
                      histogram_width_;
    const double hi = lo + histogram_width_;
    if (x < lo) {
      above += static_cast<double>(counts_[i]);
    } else if (x < hi) {
      above += static_cast<double>(counts_[i]) * (hi - x) / histogram_width_;
    }
  }
  return std::min(1.0, above / n);
}

std::vector<std::pair<double, double>> EmpiricalDistribution::ccdf_points(
    std::size_t max_points) const {
  std::vector<std::pair<double, double>> pts;
  if (count_ == 0) return pts;
  const double n = static_cast<double>(count_);
  if (exact()) {
    ensure_sorted();
    std::size_t i = 0;
    while (i < samples_.size()) {
      std::size_t j = i;
      while (j + 1 < samples_.size() && samples_[j + 1] == samples_[i]) ++j;
      pts.emplace_back(samples_[i], static_cast<double>(samples_.size() - j - 1) / n);
      i = j + 1;
    }
  } else {
    std::uint64_t cum = 0;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
      if (counts_[i] == 0) continue;
      cum += counts_[i];
      const double edge = static_cast<double>(first_bin_ + static_cast<std::int64_t>(i) + 1) *
                          histogram_width_;
      pts.emplace_back(edge, (n - static_cast<double>(cum)) / n);
    }
  }
  if (max_points > 0 && pts.size() > max_points) {
    std::vector<std::pair<double, double>> thin;
    thin.reserve(max_points);
    const double step = static_cast<double>(pts.size() - 1) /
                        static_cast<double>(max_points - 1);
    for (std::size_t i = 0; i < max_points; ++i) {
      thin.push_back(pts[static_cast<std::size_t>(std::llround(step * static_cast<double>(i)))]);
    }
    thin.erase(std::unique(thin.begin(), thin.end()), thin.end());
    pts = std::move(thin);
  }
  return pts;
}

std::uint64_t CounterSet::get(const std::string& name) const {
  const auto it = counters_.find(name);
  return it == counters_.end() ? 0 : it->second;
}

void CounterSet::merge(const CounterSet& other) {
  for (const auto& [name, value] : other.counters_) counters_[name] += value;
}

}  // namespace mcasim
