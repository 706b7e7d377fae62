#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bbo/rng.hpp"

namespace bbo {

// A point of {0,1}^d. Value type; copies are cheap enough for d <= a few
// hundred, which is the regime everything here operates in.
class BinaryVector {
 public:
  BinaryVector() = default;
  explicit BinaryVector(int dim);
  explicit BinaryVector(std::vector<std::uint8_t> bits);

  static BinaryVector random(int dim, SeededRng& rng);
  // parses a fixed-width 0/1 string, index 0 first
  static BinaryVector from_string(const std::string& s);

  int dim() const { return static_cast<int>(bits_.size()); }
  std::uint8_t operator[](int i) const { return bits_[static_cast<std::size_t>(i)]; }
  void set(int i, bool value) { bits_[static_cast<std::size_t>(i)] = value ? 1 : 0; }
  void flip(int i) { bits_[static_cast<std::size_t>(i)] ^= 1; }
  BinaryVector with_flipped(int i) const;

  int count_ones() const;
  std::string to_string() const;
  // canonical fixed-width packing, 64 bits per word, index 0 in the low bit
  std::vector<std::uint64_t> packed() const;

  bool operator==(const BinaryVector& other) const { return bits_ == other.bits_; }
  // ordering on the serialized form (index 0 most significant)
  bool lex_less(const BinaryVector& other) const;

 private:
  std::vector<std::uint8_t> bits_;
};

struct BinaryVectorHash {
  std::size_t operator()(const BinaryVector& v) const;
};

// count of differing positions; throws std::invalid_argument on dimension mismatch
int hamming_distance(const BinaryVector& a, const BinaryVector& b);

}  // namespace bbo
