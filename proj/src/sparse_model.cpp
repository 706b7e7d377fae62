#include "bbo/sparse_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bbo/benchmarks.hpp"

namespace bbo {

double SparsityMask::sparsity() const {
  const std::size_t total = pair_count(d);
  if (total == 0) return 1.0;
  return static_cast<double>(retained.size()) / static_cast<double>(total);
}

SparsityMask SparsityMask::full(int d) {
  SparsityMask mask;
  mask.d = d;
  mask.retained.reserve(pair_count(d));
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) mask.retained.emplace_back(i, j);
  }
  return mask;
}

SparsityMask SparsityMask::none(int d) {
  SparsityMask mask;
  mask.d = d;
  return mask;
}

SparsityMask generate_mask(int d, double sparsity, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("generate_mask: d must be >= 1");
  if (!(sparsity >= 0.0 && sparsity <= 1.0)) {
    throw std::invalid_argument("generate_mask: sparsity must be in [0,1]");
  }
  const std::size_t total = pair_count(d);
  const auto keep =
      static_cast<std::size_t>(std::floor(sparsity * static_cast<double>(total) + 0.5));

  std::vector<std::size_t> indices(total);
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  SeededRng rng(seed);
  for (std::size_t i = 0; i < keep; ++i) {
    const std::size_t j = i + rng.uniform_int(total - i);
    std::swap(indices[i], indices[j]);
  }
  indices.resize(keep);
  std::sort(indices.begin(), indices.end());

  SparsityMask mask;
  mask.d = d;
  mask.retained.reserve(keep);
  std::size_t flat = 0;
  std::size_t cursor = 0;
  for (int i = 0; i < d && cursor < keep; ++i) {
    for (int j = i + 1; j < d && cursor < keep; ++j, ++flat) {
      if (indices[cursor] == flat) {
        mask.retained.emplace_back(i, j);
        ++cursor;
      }
    }
  }
  return mask;
}

FeatureMap FeatureMap::full(int d) {
  return FeatureMap{d, SparsityMask::full(d)};
}

FeatureMap FeatureMap::with_mask(SparsityMask mask) {
  FeatureMap fm;
  fm.d = mask.d;
  fm.mask = std::move(mask);
  return fm;
}

Eigen::VectorXd build_features(const BinaryVector& x, const FeatureMap& fm) {
  if (x.dim() != fm.d) throw std::invalid_argument("build_features: dimension mismatch");
  Eigen::VectorXd phi(fm.feature_count());
  phi(0) = 1.0;
  for (int i = 0; i < fm.d; ++i) phi(1 + i) = x[i];
  Eigen::Index at = 1 + fm.d;
  for (const auto& [i, j] : fm.mask.retained) {
    phi(at++) = (x[i] && x[j]) ? 1.0 : 0.0;
  }
  return phi;
}

namespace {

// Marsaglia-Tsang; requires shape >= 1 (all conditionals here satisfy that)
double sample_gamma(double shape, SeededRng& rng) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_inverse_gamma(double shape, double scale, SeededRng& rng) {
  const double g = sample_gamma(shape, rng);
  return std::max(scale / g, 1e-300);
}

}  // namespace

HorseshoeGibbs::HorseshoeGibbs(const Dataset& ds, const FeatureMap& fm, SeededRng rng)
    : fm_(fm), rng_(rng) {
  if (ds.empty()) throw std::invalid_argument("HorseshoeGibbs: empty dataset");
  if (ds.dim() != fm.d) throw std::invalid_argument("HorseshoeGibbs: dimension mismatch");

  n_ = static_cast<int>(ds.size());
  m_ = fm.feature_count() - 1;

  Eigen::MatrixXd X(n_, m_);
  Eigen::VectorXd y(n_);
  for (int r = 0; r < n_; ++r) {
    const Eigen::VectorXd phi = build_features(ds[static_cast<std::size_t>(r)].point, fm);
    X.row(r) = phi.tail(m_);
    y(r) = ds[static_cast<std::size_t>(r)].value;
  }

  // center feature columns and standardize y; the intercept is recovered in
  // sample() from the removed means
  col_means_ = X.colwise().mean();
  x_centered_ = X.rowwise() - col_means_.transpose();
  y_mean_ = y.mean();
  y_scale_ = 1.0;
  if (n_ >= 2) {
    const double sd = std::sqrt((y.array() - y_mean_).square().sum() / (n_ - 1));
    if (sd > 0.0 && std::isfinite(sd)) y_scale_ = sd;
  }
  y_std_ = (y.array() - y_mean_) / y_scale_;

  xtx_ = x_centered_.transpose() * x_centered_;
  xty_ = x_centered_.transpose() * y_std_;

  beta_ = Eigen::VectorXd::Zero(m_);
  lambda2_ = Eigen::VectorXd::Ones(m_);
  nu_ = Eigen::VectorXd::Ones(m_);
}

void HorseshoeGibbs::sweep() {
  // beta | rest ~ N(A^{-1} X'y, sigma2 A^{-1}), A = X'X + diag(1/(tau2 lambda2))
  Eigen::VectorXd prior_precision(m_);
  for (int j = 0; j < m_; ++j) prior_precision(j) = 1.0 / (tau2_ * lambda2_(j));

  Eigen::MatrixXd A = xtx_;
  A.diagonal() += prior_precision;
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) {
    A.diagonal().array() += 1e-10;
    llt.compute(A);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error("HorseshoeGibbs: singular conditional covariance");
    }
  }
  const Eigen::VectorXd mean = llt.solve(xty_);
  Eigen::VectorXd z(m_);
  for (int j = 0; j < m_; ++j) z(j) = rng_.normal();
  beta_ = mean + std::sqrt(sigma2_) * llt.matrixU().solve(z);

  // sigma2 | rest
  const double sse = (y_std_ - x_centered_ * beta_).squaredNorm();
  const double penalty = (beta_.array().square() * prior_precision.array()).sum();
  sigma2_ = sample_inverse_gamma(0.5 * (n_ + m_), 0.5 * (sse + penalty), rng_);

  // lambda2_j | rest and nu_j | rest
  for (int j = 0; j < m_; ++j) {
    const double b = beta_(j);
    lambda2_(j) =
        sample_inverse_gamma(1.0, 1.0 / nu_(j) + b * b / (2.0 * tau2_ * sigma2_), rng_);
    nu_(j) = sample_inverse_gamma(1.0, 1.0 + 1.0 / lambda2_(j), rng_);
  }

  // tau2 | rest and xi | rest
  double shrink_sum = 0.0;
  for (int j = 0; j < m_; ++j) shrink_sum += beta_(j) * beta_(j) / lambda2_(j);
  tau2_ = sample_inverse_gamma(0.5 * (m_ + 1), 1.0 / xi_ + shrink_sum / (2.0 * sigma2_), rng_);
  xi_ = sample_inverse_gamma(1.0, 1.0 + 1.0 / tau2_, rng_);
}

void HorseshoeGibbs::run(int sweeps) {
  if (sweeps < 1) throw std::invalid_argument("HorseshoeGibbs::run: sweeps must be >= 1");
  for (int s = 0; s < sweeps; ++s) sweep();
}

CoefficientSample HorseshoeGibbs::sample() const {
  CoefficientSample cs;
  cs.linear.assign(static_cast<std::size_t>(fm_.d), 0.0);
  cs.quadratic.assign(fm_.mask.retained.size(), 0.0);

  double offset = y_mean_;
  for (int j = 0; j < m_; ++j) {
    const double coeff = beta_(j) * y_scale_;
    offset -= col_means_(j) * coeff;
    if (j < fm_.d) {
      cs.linear[static_cast<std::size_t>(j)] = coeff;
    } else {
      cs.quadratic[static_cast<std::size_t>(j - fm_.d)] = coeff;
    }
  }
  cs.intercept = offset;
  return cs;
}

CoefficientSample gibbs_fit(const Dataset& ds, const FeatureMap& fm, int n_sweeps,
                            SeededRng& rng) {
  HorseshoeGibbs chain(ds, fm, rng.derive(0));
  chain.run(n_sweeps);
  return chain.sample();
}

SurrogateObjective::SurrogateObjective(CoefficientSample coeffs, const FeatureMap& fm)
    : d_(fm.d), coeffs_(std::move(coeffs)), pairs_(fm.mask.retained) {
  if (coeffs_.linear.size() != static_cast<std::size_t>(d_) ||
      coeffs_.quadratic.size() != pairs_.size()) {
    throw std::invalid_argument("SurrogateObjective: coefficient layout mismatch");
  }
  rows_.assign(static_cast<std::size_t>(d_), {});
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    const auto [i, j] = pairs_[p];
    const double v = coeffs_.quadratic[p];
    rows_[static_cast<std::size_t>(i)].emplace_back(j, v);
    rows_[static_cast<std::size_t>(j)].emplace_back(i, v);
  }
}

double SurrogateObjective::evaluate(const BinaryVector& x) const {
  if (x.dim() != d_) throw std::invalid_argument("SurrogateObjective: dimension mismatch");
  double value = coeffs_.intercept;
  for (int i = 0; i < d_; ++i) {
    if (x[i]) value += coeffs_.linear[static_cast<std::size_t>(i)];
  }
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    const auto [i, j] = pairs_[p];
    if (x[i] && x[j]) value += coeffs_.quadratic[p];
  }
  return value;
}

class SurrogateWalker : public FlipWalker {
 public:
  SurrogateWalker(const SurrogateObjective& obj, BinaryVector start)
      : obj_(obj), x_(std::move(start)), value_(obj.evaluate(x_)) {
    field_.assign(static_cast<std::size_t>(obj_.d_), 0.0);
    for (int k = 0; k < obj_.d_; ++k) {
      double s = 0.0;
      for (const auto& [j, v] : obj_.rows_[static_cast<std::size_t>(k)]) {
        if (x_[j]) s += v;
      }
      field_[static_cast<std::size_t>(k)] = s;
    }
  }

  const BinaryVector& point() const override { return x_; }
  double value() const override { return value_; }

  double flip_delta(int bit) const override {
    const double sign = x_[bit] ? -1.0 : 1.0;
    return sign * (obj_.coeffs_.linear[static_cast<std::size_t>(bit)] +
                   field_[static_cast<std::size_t>(bit)]);
  }

  void flip(int bit) override {
    const double delta = flip_delta(bit);
    const double sign = x_[bit] ? -1.0 : 1.0;
    for (const auto& [j, v] : obj_.rows_[static_cast<std::size_t>(bit)]) {
      field_[static_cast<std::size_t>(j)] += sign * v;
    }
    x_.flip(bit);
    value_ += delta;
  }

 private:
  const SurrogateObjective& obj_;
  BinaryVector x_;
  double value_;
  std::vector<double> field_;
};

std::unique_ptr<FlipWalker> SurrogateObjective::make_walker(const BinaryVector& start) const {
  return std::make_unique<SurrogateWalker>(*this, start);
}

SurrogateObjective surrogate_to_objective(CoefficientSample coeffs, const FeatureMap& fm) {
  return SurrogateObjective(std::move(coeffs), fm);
}

}  // namespace bbo
