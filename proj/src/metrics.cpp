#include "bbo/metrics.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace bbo {

double relative_gap(double f_best, double f_ref) {
  if (f_ref == 0.0) throw std::invalid_argument("relative_gap: reference value is zero");
  return (f_best - f_ref) / std::abs(f_ref);
}

double value_improvement(double f_bar_m, double f_bar_ours) {
  if (f_bar_m == 0.0) throw std::invalid_argument("value_improvement: baseline is zero");
  return (f_bar_m - f_bar_ours) / f_bar_m * 100.0;
}

double iteration_improvement(const std::vector<double>& gaps, double target, int T) {
  if (static_cast<int>(gaps.size()) != T) {
    throw std::invalid_argument("iteration_improvement: sequence length must equal T");
  }
  for (int t = 1; t <= T; ++t) {
    if (gaps[static_cast<std::size_t>(t - 1)] <= target) {
      return (1.0 - static_cast<double>(t) / T) * 100.0;
    }
  }
  return 0.0;
}

AggregateStats aggregate(const std::vector<std::vector<double>>& per_instance_series) {
  if (per_instance_series.empty()) {
    throw std::invalid_argument("aggregate: no series");
  }
  const std::size_t length = per_instance_series.front().size();
  for (const auto& series : per_instance_series) {
    if (series.size() != length) throw std::invalid_argument("aggregate: length mismatch");
  }

  AggregateStats stats;
  stats.instances = static_cast<int>(per_instance_series.size());
  stats.mean.assign(length, 0.0);
  stats.stderr_.assign(length, 0.0);

  const double n = static_cast<double>(stats.instances);
  for (std::size_t i = 0; i < length; ++i) {
    double sum = 0.0;
    for (const auto& series : per_instance_series) sum += series[i];
    stats.mean[i] = sum / n;
  }
  if (stats.instances == 1) {
    std::cerr << "aggregate: single instance, reporting standard error 0\n";
    return stats;
  }
  for (std::size_t i = 0; i < length; ++i) {
    double ss = 0.0;
    for (const auto& series : per_instance_series) {
      const double dev = series[i] - stats.mean[i];
      ss += dev * dev;
    }
    stats.stderr_[i] = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return stats;
}

std::vector<int> hamming_to_optimum_series(const RunTrace& trace, const BinaryVector& minimizer) {
  std::vector<int> series;
  for (const IterationRecord& rec : trace.records) {
    if (rec.t == 0) continue;
    series.push_back(hamming_distance(rec.point, minimizer));
  }
  return series;
}

std::vector<int> consecutive_proposal_distances(const RunTrace& trace) {
  std::vector<int> series;
  const BinaryVector* prev = nullptr;
  for (const IterationRecord& rec : trace.records) {
    if (rec.t == 0) continue;
    if (prev != nullptr) series.push_back(hamming_distance(rec.point, *prev));
    prev = &rec.point;
  }
  return series;
}

}  // namespace bbo
