#include "bbo/gp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bbo {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kVarianceTolerance = -1e-9;
constexpr double kJitterFloor = 1e-8;
constexpr double kJitterCeiling = 1e-2;
}  // namespace

double kernel_value(const BinaryVector& a, const BinaryVector& b, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("kernel_value: gamma must be > 0");
  return std::exp(-gamma * hamming_distance(a, b));
}

GammaGrid GammaGrid::logarithmic(double lo, double hi, int count) {
  if (count < 1 || !(lo > 0.0) || !(hi >= lo)) {
    throw std::invalid_argument("GammaGrid: invalid range");
  }
  GammaGrid grid;
  grid.values.reserve(static_cast<std::size_t>(count));
  if (count == 1) {
    grid.values.push_back(lo);
    return grid;
  }
  const double log_lo = std::log10(lo);
  const double log_hi = std::log10(hi);
  for (int i = 0; i < count; ++i) {
    grid.values.push_back(std::pow(10.0, log_lo + (log_hi - log_lo) * i / (count - 1)));
  }
  return grid;
}

GammaGrid GammaGrid::standard() {
  return logarithmic(1e-3, std::pow(10.0, 0.5), 15);
}

namespace {

Eigen::MatrixXd build_kernel_matrix(const std::vector<BinaryVector>& points, double gamma) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    K(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v =
          std::exp(-gamma * hamming_distance(points[static_cast<std::size_t>(i)],
                                             points[static_cast<std::size_t>(j)]));
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  return K;
}

struct Factorization {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter_used = 0.0;
};

Factorization factor_with_escalation(const Eigen::MatrixXd& K, double jitter) {
  double j = jitter;
  for (;;) {
    Eigen::MatrixXd A = K;
    A.diagonal().array() += j;
    Factorization f{Eigen::LLT<Eigen::MatrixXd>(A), j};
    if (f.llt.info() == Eigen::Success) return f;
    const double next = (j < kJitterFloor) ? kJitterFloor : j * 10.0;
    if (next > kJitterCeiling) {
      throw std::runtime_error("GpPosterior: kernel matrix numerically degenerate");
    }
    j = next;
  }
}

}  // namespace

GpPosterior GpPosterior::fit(const Dataset& ds, double gamma, double jitter) {
  if (ds.empty()) throw std::invalid_argument("GpPosterior::fit: empty dataset");
  if (!(gamma > 0.0)) throw std::invalid_argument("GpPosterior::fit: gamma must be > 0");
  if (jitter < 0.0) throw std::invalid_argument("GpPosterior::fit: jitter must be >= 0");

  GpPosterior post;
  post.dim_ = ds.dim();
  post.gamma_ = gamma;
  post.points_.reserve(ds.size());
  for (const Observation& obs : ds.observations()) post.points_.push_back(obs.point);

  const auto n = static_cast<Eigen::Index>(ds.size());
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = ds[static_cast<std::size_t>(i)].value;
  post.y_offset_ = y.mean();
  post.y_centered_ = y.array() - post.y_offset_;

  const Eigen::MatrixXd K = build_kernel_matrix(post.points_, gamma);
  Factorization f = factor_with_escalation(K, jitter);
  post.jitter_ = f.jitter_used;
  post.chol_lower_ = f.llt.matrixL();
  post.weights_ = f.llt.solve(post.y_centered_);
  post.kernel_inverse_ = f.llt.solve(Eigen::MatrixXd::Identity(n, n));
  return post;
}

Eigen::VectorXd GpPosterior::kernel_column(const BinaryVector& x) const {
  if (x.dim() != dim_) throw std::invalid_argument("GpPosterior: dimension mismatch");
  Eigen::VectorXd k(static_cast<Eigen::Index>(points_.size()));
  for (std::size_t i = 0; i < points_.size(); ++i) {
    k(static_cast<Eigen::Index>(i)) = std::exp(-gamma_ * hamming_distance(points_[i], x));
  }
  return k;
}

GpPosterior::Prediction GpPosterior::predict(const BinaryVector& x) const {
  const Eigen::VectorXd k = kernel_column(x);
  Prediction p;
  p.mean = y_offset_ + k.dot(weights_);
  const Eigen::VectorXd half = chol_lower_.triangularView<Eigen::Lower>().solve(k);
  double variance = 1.0 - half.squaredNorm();
  if (variance < kVarianceTolerance) {
    throw std::runtime_error("GpPosterior::predict: variance below roundoff tolerance");
  }
  p.variance = std::clamp(variance, 0.0, 1.0);
  return p;
}

double log_marginal_likelihood(const Dataset& ds, double gamma, double jitter) {
  if (ds.empty()) throw std::invalid_argument("log_marginal_likelihood: empty dataset");
  if (!(gamma > 0.0)) throw std::invalid_argument("log_marginal_likelihood: gamma must be > 0");

  std::vector<BinaryVector> points;
  points.reserve(ds.size());
  for (const Observation& obs : ds.observations()) points.push_back(obs.point);

  const auto n = static_cast<Eigen::Index>(ds.size());
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = ds[static_cast<std::size_t>(i)].value;
  const Eigen::VectorXd y_centered = y.array() - y.mean();

  const Eigen::MatrixXd K = build_kernel_matrix(points, gamma);
  Factorization f = factor_with_escalation(K, jitter);
  const auto& L = f.llt.matrixLLT();
  const Eigen::VectorXd half = L.triangularView<Eigen::Lower>().solve(y_centered);

  double log_det_half = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) log_det_half += std::log(L(i, i));

  return -0.5 * half.squaredNorm() - log_det_half - 0.5 * static_cast<double>(n) * kLog2Pi;
}

double select_gamma(const Dataset& ds, const GammaGrid& grid, double jitter) {
  if (grid.values.empty()) throw std::invalid_argument("select_gamma: empty grid");
  double best_gamma = grid.values.front();
  double best_ll = -std::numeric_limits<double>::infinity();
  for (double gamma : grid.values) {
    const double ll = log_marginal_likelihood(ds, gamma, jitter);
    if (ll > best_ll) {
      best_ll = ll;
      best_gamma = gamma;
    }
  }
  return best_gamma;
}

LcbObjective::LcbObjective(std::shared_ptr<const GpPosterior> posterior, double kappa)
    : posterior_(std::move(posterior)), kappa_(kappa) {
  if (!posterior_) throw std::invalid_argument("LcbObjective: null posterior");
  if (!(kappa_ > 0.0)) throw std::invalid_argument("LcbObjective: kappa must be > 0");
}

int LcbObjective::dim() const {
  return posterior_->dim();
}

namespace {

double lcb_from_column(const GpPosterior& post, const Eigen::VectorXd& k, double kappa) {
  const double mean = post.y_offset() + k.dot(post.weights());
  const double q = k.dot(post.kernel_inverse() * k);
  double variance = 1.0 - q;
  if (variance < kVarianceTolerance) {
    throw std::runtime_error("LcbObjective: variance below roundoff tolerance");
  }
  variance = std::clamp(variance, 0.0, 1.0);
  return mean - kappa * std::sqrt(variance);
}

}  // namespace

double LcbObjective::evaluate(const BinaryVector& x) const {
  return lcb_from_column(*posterior_, posterior_->kernel_column(x), kappa_);
}

class LcbWalker : public FlipWalker {
 public:
  LcbWalker(const LcbObjective& obj, BinaryVector start)
      : obj_(obj),
        post_(*obj.posterior_),
        x_(std::move(start)),
        column_(post_.kernel_column(x_)),
        value_(lcb_from_column(post_, column_, obj.kappa_)),
        scale_down_(std::exp(-post_.gamma())),
        scale_up_(std::exp(post_.gamma())),
        cached_bit_(-1) {}

  const BinaryVector& point() const override { return x_; }
  double value() const override { return value_; }

  double flip_delta(int bit) const override {
    compute_flip(bit);
    return cached_value_ - value_;
  }

  void flip(int bit) override {
    compute_flip(bit);
    column_.swap(cached_column_);
    value_ = cached_value_;
    x_.flip(bit);
    cached_bit_ = -1;
  }

 private:
  // flipping the query bit moves every training distance by +-1, so the
  // kernel column scales entrywise by exp(-+gamma)
  void compute_flip(int bit) const {
    if (cached_bit_ == bit) return;
    const auto& points = post_.training_points();
    cached_column_.resize(column_.size());
    for (Eigen::Index i = 0; i < column_.size(); ++i) {
      const bool agrees = points[static_cast<std::size_t>(i)][bit] == x_[bit];
      cached_column_(i) = column_(i) * (agrees ? scale_down_ : scale_up_);
    }
    cached_value_ = lcb_from_column(post_, cached_column_, obj_.kappa_);
    cached_bit_ = bit;
  }

  const LcbObjective& obj_;
  const GpPosterior& post_;
  BinaryVector x_;
  Eigen::VectorXd column_;
  double value_;
  double scale_down_;
  double scale_up_;

  mutable int cached_bit_;
  mutable Eigen::VectorXd cached_column_;
  mutable double cached_value_ = 0.0;
};

std::unique_ptr<FlipWalker> LcbObjective::make_walker(const BinaryVector& start) const {
  return std::make_unique<LcbWalker>(*this, start);
}

}  // namespace bbo
