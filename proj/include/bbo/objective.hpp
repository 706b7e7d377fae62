#pragma once

#include <memory>

#include "bbo/binary_vector.hpp"

namespace bbo {

// Incremental evaluator positioned at one point of the cube. flip_delta(k)
// must equal evaluate(x with bit k flipped) - evaluate(x) for the walker's
// current x; flip(k) commits the move and updates any cached state.
class FlipWalker {
 public:
  virtual ~FlipWalker() = default;
  virtual const BinaryVector& point() const = 0;
  virtual double value() const = 0;
  virtual double flip_delta(int bit) const = 0;
  virtual void flip(int bit) = 0;
};

class PseudoBooleanObjective {
 public:
  virtual ~PseudoBooleanObjective() = default;
  virtual int dim() const = 0;
  virtual double evaluate(const BinaryVector& x) const = 0;
  virtual std::unique_ptr<FlipWalker> make_walker(const BinaryVector& start) const = 0;
};

}  // namespace bbo
