#include "bbo/dataset.hpp"

#include <cmath>
#include <stdexcept>

namespace bbo {

void Dataset::insert(BinaryVector point, double value) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("Dataset::insert: value must be finite");
  }
  if (empty()) {
    dim_ = point.dim();
  } else if (point.dim() != dim_) {
    throw std::invalid_argument("Dataset::insert: dimension mismatch");
  }
  auto [it, fresh] = index_.try_emplace(point, observations_.size());
  if (!fresh) {
    throw std::invalid_argument("Dataset::insert: duplicate point");
  }
  if (!observations_.empty() && value < observations_[best_index_].value) {
    best_index_ = observations_.size();
  }
  observations_.push_back(Observation{std::move(point), value});
}

bool Dataset::contains(const BinaryVector& point) const {
  if (empty()) return false;
  if (point.dim() != dim_) {
    throw std::invalid_argument("Dataset::contains: dimension mismatch");
  }
  return index_.find(point) != index_.end();
}

const Observation& Dataset::best() const {
  if (empty()) throw std::logic_error("Dataset::best: empty dataset");
  return observations_[best_index_];
}

const Observation& best_observation(const Dataset& ds) {
  return ds.best();
}

BinaryVector random_unevaluated(int dim, const Dataset& ds, SeededRng& rng) {
  if (dim < 1) throw std::invalid_argument("random_unevaluated: dimension must be >= 1");
  if (!ds.empty() && ds.dim() != dim) {
    throw std::invalid_argument("random_unevaluated: dimension mismatch");
  }
  if (dim <= 62 && ds.size() >= (1ULL << dim)) {
    throw std::runtime_error("random_unevaluated: search space exhausted");
  }
  for (int attempt = 0; attempt < 1000; ++attempt) {
    BinaryVector x = BinaryVector::random(dim, rng);
    if (!ds.contains(x)) return x;
  }
  // 1000 straight collisions means the dataset covers almost the entire cube,
  // which is only storable for small dim; enumerate the complement instead.
  if (dim > 25) {
    throw std::runtime_error("random_unevaluated: rejection sampling failed");
  }
  std::vector<BinaryVector> unevaluated;
  const std::uint64_t total = 1ULL << dim;
  for (std::uint64_t code = 0; code < total; ++code) {
    BinaryVector x(dim);
    for (int i = 0; i < dim; ++i) x.set(i, (code >> i) & 1ULL);
    if (!ds.contains(x)) unevaluated.push_back(std::move(x));
  }
  if (unevaluated.empty()) {
    throw std::runtime_error("random_unevaluated: search space exhausted");
  }
  return unevaluated[rng.uniform_int(unevaluated.size())];
}

}  // namespace bbo
