#pragma once

#include <cstdint>
#include <vector>

#include "corrkit/prng.hpp"

namespace corrkit {

// Dense vector over {-1,+1}, bit-packed 64 per word; bit 1 means +1.
// Pad bits beyond dim() are kept zero so whole-word ops stay exact.
class SignVector {
 public:
  SignVector() = default;
  explicit SignVector(std::int64_t dim) : dim_(dim), words_((dim + 63) / 64, 0) {}

  std::int64_t dim() const { return dim_; }

  int get(std::int64_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1 ? +1 : -1;
  }

  void set(std::int64_t i, int sign) {
    const std::uint64_t mask = 1ull << (i & 63);
    if (sign > 0)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }

  void flip(std::int64_t i) { words_[i >> 6] ^= 1ull << (i & 63); }

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }

  // <x,y> = d - 2*HammingDistance(x,y)
  std::int64_t inner(const SignVector& other) const {
    std::int64_t mismatches = 0;
    for (std::size_t w = 0; w < words_.size(); ++w)
      mismatches += __builtin_popcountll(words_[w] ^ other.words_[w]);
    return dim_ - 2 * mismatches;
  }

  // Sum of entries (inner product with all-ones).
  std::int64_t sum() const {
    std::int64_t ones = 0;
    for (std::uint64_t w : words_) ones += __builtin_popcountll(w);
    return 2 * ones - dim_;
  }

  // Entrywise product; dims must match.
  SignVector hadamard(const SignVector& other) const {
    SignVector out(dim_);
    for (std::size_t w = 0; w < words_.size(); ++w)
      out.words_[w] = ~(words_[w] ^ other.words_[w]);
    out.clear_pad();
    return out;
  }

  static SignVector random(std::int64_t dim, SplitMix64& rng) {
    SignVector v(dim);
    for (auto& w : v.words_) w = rng.next();
    v.clear_pad();
    return v;
  }

  bool operator==(const SignVector& other) const {
    return dim_ == other.dim_ && words_ == other.words_;
  }

  void clear_pad() {
    if (dim_ & 63) words_.back() &= (1ull << (dim_ & 63)) - 1;
  }

 private:
  std::int64_t dim_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace corrkit
