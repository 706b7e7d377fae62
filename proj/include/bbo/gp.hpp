#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "bbo/binary_vector.hpp"
#include "bbo/dataset.hpp"
#include "bbo/objective.hpp"

namespace bbo {

// k(x, x') = exp(-gamma * hamming_distance(x, x')), gamma > 0
double kernel_value(const BinaryVector& a, const BinaryVector& b, double gamma);

struct GammaGrid {
  std::vector<double> values;  // strictly increasing, all positive

  static GammaGrid logarithmic(double lo, double hi, int count);
  // 15 points over the default decay-rate range [1e-3, 10^0.5]
  static GammaGrid standard();
};

// Hamming-kernel GP conditioned on a dataset. Observations are centered by
// their mean, which is added back in predictions, so the prior mean far from
// data reverts to the data mean rather than zero.
class GpPosterior {
 public:
  struct Prediction {
    double mean = 0.0;
    double variance = 0.0;
  };

  // Builds K + jitter*I and factorizes. On factorization failure the jitter is
  // escalated by x10 starting from 1e-8 up to 1e-2, then this throws.
  static GpPosterior fit(const Dataset& ds, double gamma, double jitter);

  Prediction predict(const BinaryVector& x) const;

  int dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  double gamma() const { return gamma_; }
  double jitter() const { return jitter_; }  // jitter actually used
  double y_offset() const { return y_offset_; }

  const std::vector<BinaryVector>& training_points() const { return points_; }
  const Eigen::MatrixXd& cholesky_factor() const { return chol_lower_; }
  const Eigen::VectorXd& weights() const { return weights_; }  // (K+jI)^{-1} y_centered
  const Eigen::MatrixXd& kernel_inverse() const { return kernel_inverse_; }

  Eigen::VectorXd kernel_column(const BinaryVector& x) const;

 private:
  GpPosterior() = default;

  int dim_ = 0;
  double gamma_ = 0.0;
  double jitter_ = 0.0;
  double y_offset_ = 0.0;
  std::vector<BinaryVector> points_;
  Eigen::VectorXd y_centered_;
  Eigen::MatrixXd chol_lower_;
  Eigen::VectorXd weights_;
  Eigen::MatrixXd kernel_inverse_;

  friend double log_marginal_likelihood(const Dataset&, double, double);
};

// -1/2 y'K^{-1}y - 1/2 log|K| - (t/2) log 2pi, with K = K(gamma) + jitter*I and
// y the centered observations
double log_marginal_likelihood(const Dataset& ds, double gamma, double jitter);

// grid value maximizing the log marginal likelihood; ties go to the smaller gamma
double select_gamma(const Dataset& ds, const GammaGrid& grid, double jitter);

// a(x) = mu(x) - kappa * sigma(x). The walker keeps the kernel column of the
// current point updated multiplicatively, so a flip costs O(n) for the column
// plus O(n^2) for the variance form instead of a full refit.
class LcbObjective : public PseudoBooleanObjective {
 public:
  LcbObjective(std::shared_ptr<const GpPosterior> posterior, double kappa);

  int dim() const override;
  double evaluate(const BinaryVector& x) const override;
  std::unique_ptr<FlipWalker> make_walker(const BinaryVector& start) const override;

  double kappa() const { return kappa_; }

 private:
  std::shared_ptr<const GpPosterior> posterior_;
  double kappa_;
  friend class LcbWalker;
};

}  // namespace bbo
