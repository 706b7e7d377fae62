#pragma once

#include <optional>
#include <string>

#include "bbo/annealer.hpp"
#include "bbo/binary_vector.hpp"
#include "bbo/objective.hpp"

namespace bbo {

enum class ReferenceMethod { exhaustive, multi_restart_sa };

std::string to_string(ReferenceMethod method);

struct ReferenceValue {
  double value = 0.0;
  std::optional<BinaryVector> minimizer;  // always present for exhaustive
  ReferenceMethod method = ReferenceMethod::exhaustive;
};

struct SaOracleConfig {
  int runs = 1000;
  int sweeps = 1000;
};

// Exact minimum over all 2^d points, visited in Gray-code order so each step
// is one incremental flip. Ties go to the lexicographically smallest pattern.
// Refuses dimensions above the cap.
ReferenceValue exhaustive_reference(const PseudoBooleanObjective& obj, int cap = 25);

// Best of `runs` anneals from independent random starts.
ReferenceValue sa_reference(const PseudoBooleanObjective& obj, const SaOracleConfig& cfg,
                            SeededRng& rng);

ReferenceValue reference_value(const PseudoBooleanObjective& obj, ReferenceMethod mode,
                               const SaOracleConfig& cfg, SeededRng& rng, int exhaustive_cap = 25);

}  // namespace bbo
