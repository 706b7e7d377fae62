#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bbo/binary_vector.hpp"
#include "bbo/dataset.hpp"
#include "bbo/objective.hpp"
#include "bbo/rng.hpp"

namespace bbo {

// Which off-diagonal (i<j) interaction terms the surrogate keeps. Linear
// terms are always retained and are not represented here.
struct SparsityMask {
  int d = 0;
  std::vector<std::pair<int, int>> retained;  // sorted, i < j

  double sparsity() const;
  static SparsityMask full(int d);
  static SparsityMask none(int d);
};

// Retains round(sparsity * C(d,2)) pairs chosen uniformly without
// replacement; round() is half-up. Pure function of (d, sparsity, seed), so
// a mask keyed by (instance, level) is bit-identical across strategies.
SparsityMask generate_mask(int d, double sparsity, std::uint64_t seed);

struct FeatureMap {
  int d = 0;
  SparsityMask mask;

  int feature_count() const { return 1 + d + static_cast<int>(mask.retained.size()); }
  static FeatureMap full(int d);
  static FeatureMap with_mask(SparsityMask mask);
};

// [1, x_1..x_d, {x_i x_j for retained (i,j)}] in the map's canonical order
Eigen::VectorXd build_features(const BinaryVector& x, const FeatureMap& fm);

struct CoefficientSample {
  double intercept = 0.0;
  std::vector<double> linear;     // size d
  std::vector<double> quadratic;  // aligned with fm.mask.retained
};

// Bayesian linear regression of y on the quadratic feature map under a
// horseshoe prior, sampled by Gibbs. Local/global scales use the
// auxiliary inverse-gamma parameterization, which gives every block a
// closed-form full conditional. The response is centered and scaled to unit
// variance for the run; returned coefficients are on the original scale.
class HorseshoeGibbs {
 public:
  HorseshoeGibbs(const Dataset& ds, const FeatureMap& fm, SeededRng rng);

  void run(int sweeps);
  CoefficientSample sample() const;  // current chain state, back-transformed

 private:
  void sweep();

  FeatureMap fm_;
  int n_ = 0;
  int m_ = 0;  // regression coefficients (features minus intercept)

  Eigen::MatrixXd x_centered_;
  Eigen::VectorXd col_means_;
  Eigen::VectorXd y_std_;
  Eigen::MatrixXd xtx_;
  Eigen::VectorXd xty_;
  double y_mean_ = 0.0;
  double y_scale_ = 1.0;

  Eigen::VectorXd beta_;
  Eigen::VectorXd lambda2_;
  Eigen::VectorXd nu_;
  double tau2_ = 1.0;
  double xi_ = 1.0;
  double sigma2_ = 1.0;

  SeededRng rng_;
};

// One posterior coefficient sample after n_sweeps full conditional sweeps.
CoefficientSample gibbs_fit(const Dataset& ds, const FeatureMap& fm, int n_sweeps,
                            SeededRng& rng);

// The sampled surrogate as a minimizable pseudo-boolean objective (masked
// QUBO). flip_delta is O(d).
class SurrogateObjective : public PseudoBooleanObjective {
 public:
  SurrogateObjective(CoefficientSample coeffs, const FeatureMap& fm);

  int dim() const override { return d_; }
  double evaluate(const BinaryVector& x) const override;
  std::unique_ptr<FlipWalker> make_walker(const BinaryVector& start) const override;

 private:
  int d_ = 0;
  CoefficientSample coeffs_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<std::vector<std::pair<int, double>>> rows_;
  friend class SurrogateWalker;
};

SurrogateObjective surrogate_to_objective(CoefficientSample coeffs, const FeatureMap& fm);

}  // namespace bbo
