#pragma once

#include <cstddef>
#include <unordered_map>
#include <vector>

#include "bbo/binary_vector.hpp"
#include "bbo/rng.hpp"

namespace bbo {

struct Observation {
  BinaryVector point;
  double value = 0.0;
};

// Ordered observation store with O(1) expected membership on the packed bit
// pattern. Inserting an already-present pattern is an error: every proposal
// strategy guarantees unevaluated points, so a duplicate signals a bug
// upstream.
class Dataset {
 public:
  Dataset() = default;

  void insert(BinaryVector point, double value);
  bool contains(const BinaryVector& point) const;

  std::size_t size() const { return observations_.size(); }
  bool empty() const { return observations_.empty(); }
  int dim() const { return dim_; }

  const Observation& operator[](std::size_t i) const { return observations_[i]; }
  const std::vector<Observation>& observations() const { return observations_; }

  // minimum stored value; ties go to the earliest insertion
  const Observation& best() const;

 private:
  int dim_ = 0;
  std::vector<Observation> observations_;
  std::unordered_map<BinaryVector, std::size_t, BinaryVectorHash> index_;
  std::size_t best_index_ = 0;
};

const Observation& best_observation(const Dataset& ds);

// Uniform draw from {0,1}^dim minus the evaluated set. Rejection sampling;
// falls back to explicit enumeration if the dataset covers nearly the whole
// cube (only reachable for small dim).
BinaryVector random_unevaluated(int dim, const Dataset& ds, SeededRng& rng);

}  // namespace bbo
