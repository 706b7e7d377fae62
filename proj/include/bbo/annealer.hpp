#pragma once

#include <vector>

#include "bbo/binary_vector.hpp"
#include "bbo/objective.hpp"
#include "bbo/rng.hpp"

namespace bbo {

// Geometric cooling. One sweep proposes dim single-bit flips at uniformly
// random indices with Metropolis acceptance.
struct SaSchedule {
  int sweeps = 1000;
  double t_init = 1.0;
  double t_final = 1e-3;

  double temperature(int sweep) const;
  void validate() const;  // requires t_init >= t_final > 0, sweeps >= 1
};

// t_init = max(1, value range over 100 random probes), t_final = 1e-3 * t_init
SaSchedule default_schedule_for(const PseudoBooleanObjective& obj, int sweeps, SeededRng& rng);

// min(1, exp(-delta / temperature))
double accept_probability(double delta, double temperature);

struct AnnealResult {
  BinaryVector point;
  double value = 0.0;
};

// Returns the best point visited (not the final one). Deterministic given the
// rng seed. Throws on non-finite objective values.
AnnealResult anneal(const PseudoBooleanObjective& obj, const BinaryVector& init,
                    const SaSchedule& sched, SeededRng& rng);

// `runs` independent anneals, run r starting from inits[r % inits.size()] with
// seed derived from (rng.seed, r); min-reduction with ties to the earliest run.
AnnealResult multi_restart(const PseudoBooleanObjective& obj,
                           const std::vector<BinaryVector>& inits, int runs,
                           const SaSchedule& sched, SeededRng& rng);

}  // namespace bbo
