#pragma once

#include <vector>

#include "bbo/binary_vector.hpp"
#include "bbo/strategies.hpp"

namespace bbo {

// (f_best - f_ref) / |f_ref|; may be negative when the search beats an
// SA-based reference. Throws on f_ref == 0.
double relative_gap(double f_best, double f_ref);

// (f_bar_m - f_bar_ours) / f_bar_m * 100. Throws on f_bar_m == 0.
double value_improvement(double f_bar_m, double f_bar_ours);

// First iteration T_r with gap <= target gives (1 - T_r/T) * 100; if the
// target is never reached the improvement is 0. `gaps` holds the per-iteration
// values for t = 1..T.
double iteration_improvement(const std::vector<double>& gaps, double target, int T);

struct AggregateStats {
  std::vector<double> mean;
  std::vector<double> stderr_;  // sample sd / sqrt(instances); 0 for one instance
  int instances = 0;
};

// elementwise across instances; all series must have equal length
AggregateStats aggregate(const std::vector<std::vector<double>>& per_instance_series);

// Hamming distance of each proposed point (t = 1..T) to the reference minimizer
std::vector<int> hamming_to_optimum_series(const RunTrace& trace, const BinaryVector& minimizer);

// Hamming distance of each proposed point (t = 2..T) to the previous proposal
std::vector<int> consecutive_proposal_distances(const RunTrace& trace);

}  // namespace bbo
