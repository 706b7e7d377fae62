#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bbo/binary_vector.hpp"
#include "bbo/objective.hpp"
#include "bbo/rng.hpp"

namespace bbo {

// canonical upper-triangular layouts
std::size_t pair_count(int d);
std::size_t triple_count(int d);
std::size_t pair_index(int d, int i, int j);           // requires 0 <= i < j < d
std::size_t triple_index(int d, int i, int j, int k);  // requires 0 <= i < j < k < d

// Fully connected quadratic instance: f(x) = sum_i a_i x_i + sum_{i<j} a_ij x_i x_j.
struct QuboInstance {
  int d = 0;
  std::vector<double> linear;     // size d
  std::vector<double> quadratic;  // size C(d,2), (i<j) order

  double pair_coeff(int i, int j) const { return quadratic[pair_index(d, i, j)]; }
};

// Third-order extension: adds sum_{i<j<k} a_ijk x_i x_j x_k.
struct HuboInstance {
  int d = 0;
  std::vector<double> linear;
  std::vector<double> quadratic;
  std::vector<double> cubic;  // size C(d,3), (i<j<k) order

  double pair_coeff(int i, int j) const { return quadratic[pair_index(d, i, j)]; }
  double triple_coeff(int i, int j, int k) const { return cubic[triple_index(d, i, j, k)]; }
};

// Coefficients are i.i.d. N(0,1), drawn in canonical order (linear, then
// quadratic, then cubic), so an instance is a pure function of (d, seed).
QuboInstance generate_qubo(int d, std::uint64_t seed);
HuboInstance generate_hubo(int d, std::uint64_t seed);

double evaluate_qubo(const QuboInstance& inst, const BinaryVector& x);
double evaluate_hubo(const HuboInstance& inst, const BinaryVector& x);

HuboInstance lift_to_hubo(const QuboInstance& inst);

// n distinct vectors with i.i.d. uniform bits; duplicates are redrawn
std::vector<BinaryVector> generate_initial_points(int d, int n, std::uint64_t seed);

// objective adapters with incremental flip deltas (O(d) for QUBO, O(d^2) for HUBO)
class QuboObjective : public PseudoBooleanObjective {
 public:
  explicit QuboObjective(QuboInstance inst);
  int dim() const override { return inst_.d; }
  double evaluate(const BinaryVector& x) const override;
  std::unique_ptr<FlipWalker> make_walker(const BinaryVector& start) const override;
  const QuboInstance& instance() const { return inst_; }

 private:
  QuboInstance inst_;
  std::vector<std::vector<std::pair<int, double>>> rows_;  // symmetric adjacency
  friend class QuboWalker;
};

class HuboObjective : public PseudoBooleanObjective {
 public:
  explicit HuboObjective(HuboInstance inst);
  int dim() const override { return inst_.d; }
  double evaluate(const BinaryVector& x) const override;
  std::unique_ptr<FlipWalker> make_walker(const BinaryVector& start) const override;
  const HuboInstance& instance() const { return inst_; }

 private:
  HuboInstance inst_;
  std::vector<std::vector<std::pair<int, double>>> rows_;
  // per variable: the (j,k,coeff) triples it participates in
  std::vector<std::vector<std::tuple<int, int, double>>> cubic_rows_;
  friend class HuboWalker;
};

// archival instance format: {kind, d, seed, linear[], quadratic[{i,j,v}], cubic[{i,j,k,v}]}
nlohmann::json qubo_to_json(const QuboInstance& inst, std::uint64_t seed);
nlohmann::json hubo_to_json(const HuboInstance& inst, std::uint64_t seed);
QuboInstance qubo_from_json(const nlohmann::json& j);
HuboInstance hubo_from_json(const nlohmann::json& j);

}  // namespace bbo
