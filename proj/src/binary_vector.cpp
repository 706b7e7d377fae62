#include "bbo/binary_vector.hpp"

#include <bit>
#include <stdexcept>

namespace bbo {

BinaryVector::BinaryVector(int dim) {
  if (dim < 1) throw std::invalid_argument("BinaryVector: dimension must be >= 1");
  bits_.assign(static_cast<std::size_t>(dim), 0);
}

BinaryVector::BinaryVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw std::invalid_argument("BinaryVector: dimension must be >= 1");
  for (std::uint8_t b : bits_) {
    if (b > 1) throw std::invalid_argument("BinaryVector: elements must be 0 or 1");
  }
}

BinaryVector BinaryVector::random(int dim, SeededRng& rng) {
  BinaryVector v(dim);
  for (int i = 0; i < dim; ++i) v.bits_[static_cast<std::size_t>(i)] = rng.coin() ? 1 : 0;
  return v;
}

BinaryVector BinaryVector::from_string(const std::string& s) {
  std::vector<std::uint8_t> bits;
  bits.reserve(s.size());
  for (char c : s) {
    if (c == '0') {
      bits.push_back(0);
    } else if (c == '1') {
      bits.push_back(1);
    } else {
      throw std::invalid_argument("BinaryVector: string must contain only 0/1");
    }
  }
  return BinaryVector(std::move(bits));
}

BinaryVector BinaryVector::with_flipped(int i) const {
  BinaryVector copy = *this;
  copy.flip(i);
  return copy;
}

int BinaryVector::count_ones() const {
  int n = 0;
  for (std::uint8_t b : bits_) n += b;
  return n;
}

std::string BinaryVector::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (std::uint8_t b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

std::vector<std::uint64_t> BinaryVector::packed() const {
  std::vector<std::uint64_t> words((bits_.size() + 63) / 64, 0);
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) words[i / 64] |= (1ULL << (i % 64));
  }
  return words;
}

bool BinaryVector::lex_less(const BinaryVector& other) const {
  return bits_ < other.bits_;
}

std::size_t BinaryVectorHash::operator()(const BinaryVector& v) const {
  std::uint64_t h = 0x2545f4914f6cdd1dULL ^ static_cast<std::uint64_t>(v.dim());
  for (std::uint64_t w : v.packed()) h = mix_seed(h ^ w);
  return static_cast<std::size_t>(h);
}

int hamming_distance(const BinaryVector& a, const BinaryVector& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("hamming_distance: dimension mismatch");
  }
  int dist = 0;
  for (int i = 0; i < a.dim(); ++i) dist += (a[i] != b[i]) ? 1 : 0;
  return dist;
}

}  // namespace bbo
