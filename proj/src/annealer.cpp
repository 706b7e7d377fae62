#include "bbo/annealer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bbo {

double SaSchedule::temperature(int sweep) const {
  if (sweeps <= 1) return t_init;
  const double ratio = t_final / t_init;
  return t_init * std::pow(ratio, static_cast<double>(sweep) / (sweeps - 1));
}

void SaSchedule::validate() const {
  if (sweeps < 1) throw std::invalid_argument("SaSchedule: sweeps must be >= 1");
  if (!(t_final > 0.0) || !(t_init >= t_final)) {
    throw std::invalid_argument("SaSchedule: requires t_init >= t_final > 0");
  }
}

SaSchedule default_schedule_for(const PseudoBooleanObjective& obj, int sweeps, SeededRng& rng) {
  double lo = 0.0;
  double hi = 0.0;
  for (int i = 0; i < 100; ++i) {
    BinaryVector x = BinaryVector::random(obj.dim(), rng);
    const double v = obj.evaluate(x);
    if (i == 0) {
      lo = hi = v;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  SaSchedule sched;
  sched.sweeps = sweeps;
  sched.t_init = std::max(1.0, hi - lo);
  sched.t_final = 1e-3 * sched.t_init;
  return sched;
}

double accept_probability(double delta, double temperature) {
  if (delta <= 0.0) return 1.0;
  if (!(temperature > 0.0)) return 0.0;
  return std::exp(-delta / temperature);
}

AnnealResult anneal(const PseudoBooleanObjective& obj, const BinaryVector& init,
                    const SaSchedule& sched, SeededRng& rng) {
  if (init.dim() != obj.dim()) throw std::invalid_argument("anneal: dimension mismatch");
  sched.validate();

  auto walker = obj.make_walker(init);
  if (!std::isfinite(walker->value())) {
    throw std::runtime_error("anneal: non-finite objective value");
  }
  AnnealResult best{init, walker->value()};

  const int d = obj.dim();
  for (int sweep = 0; sweep < sched.sweeps; ++sweep) {
    const double temperature = sched.temperature(sweep);
    for (int rep = 0; rep < d; ++rep) {
      const int bit = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(d)));
      const double delta = walker->flip_delta(bit);
      if (!std::isfinite(delta)) {
        throw std::runtime_error("anneal: non-finite objective value");
      }
      bool accepted = delta <= 0.0;
      if (!accepted) {
        accepted = rng.uniform() < accept_probability(delta, temperature);
      }
      if (accepted) {
        walker->flip(bit);
        if (walker->value() < best.value) {
          best.point = walker->point();
          best.value = walker->value();
        }
      }
    }
  }
  return best;
}

AnnealResult multi_restart(const PseudoBooleanObjective& obj,
                           const std::vector<BinaryVector>& inits, int runs,
                           const SaSchedule& sched, SeededRng& rng) {
  if (runs < 1) throw std::invalid_argument("multi_restart: runs must be >= 1");
  if (inits.empty()) throw std::invalid_argument("multi_restart: inits must be nonempty");

  AnnealResult best;
  bool have_best = false;
  for (int r = 0; r < runs; ++r) {
    SeededRng run_rng = rng.derive(static_cast<std::uint64_t>(r));
    AnnealResult result = anneal(obj, inits[static_cast<std::size_t>(r) % inits.size()],
                                 sched, run_rng);
    if (!have_best || result.value < best.value) {
      best = std::move(result);
      have_best = true;
    }
  }
  return best;
}

}  // namespace bbo
