#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "uncertlab/rng.hpp"

namespace uncertlab {

// Fixed-length {0,1} string, word-packed. The packing is an internal detail;
// all observable semantics are via the dense per-coordinate view.
class BitVector {
 public:
  BitVector() = default;

  explicit BitVector(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  static BitVector from_string(const std::string& s) {
    BitVector v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] != '0' && s[i] != '1') throw std::invalid_argument("bit string");
      v.set(i, s[i] == '1');
    }
    return v;
  }

  static BitVector random(std::size_t n, Rng& rng) {
    BitVector v(n);
    for (auto& w : v.words_) w = rng.next_u64();
    v.mask_tail();
    return v;
  }

  std::size_t size() const { return n_; }

  int get(std::size_t i) const {
    return static_cast<int>((words_[i >> 6] >> (i & 63)) & 1u);
  }
  int operator[](std::size_t i) const { return get(i); }

  void set(std::size_t i, bool b) {
    const std::uint64_t m = 1ull << (i & 63);
    if (b)
      words_[i >> 6] |= m;
    else
      words_[i >> 6] &= ~m;
  }

  void flip(std::size_t i) { words_[i >> 6] ^= 1ull << (i & 63); }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  BitVector operator^(const BitVector& o) const {
    if (n_ != o.n_) throw std::invalid_argument("BitVector length mismatch");
    BitVector r(n_);
    for (std::size_t i = 0; i < words_.size(); ++i)
      r.words_[i] = words_[i] ^ o.words_[i];
    return r;
  }

  bool operator==(const BitVector& o) const {
    return n_ == o.n_ && words_ == o.words_;
  }

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words_mut() { return words_; }

  std::string to_string() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i) s[i] = get(i) ? '1' : '0';
    return s;
  }

  void mask_tail() {
    if (n_ & 63) words_.back() &= (~0ull) >> (64 - (n_ & 63));
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

// Fixed-length {-1,+1} string. Stored as bits with the Fourier-analysis
// convention bit b <-> sign (-1)^b, i.e. 0 -> +1 and 1 -> -1.
class SignVector {
 public:
  SignVector() = default;
  explicit SignVector(std::size_t n) : bits_(n) {}

  static SignVector all_plus(std::size_t n) { return SignVector(n); }

  static SignVector from_bits(const BitVector& b) {
    SignVector v;
    v.bits_ = b;
    return v;
  }

  static SignVector random(std::size_t n, Rng& rng) {
    return from_bits(BitVector::random(n, rng));
  }

  std::size_t size() const { return bits_.size(); }

  int get(std::size_t i) const { return bits_.get(i) ? -1 : +1; }
  int operator[](std::size_t i) const { return get(i); }

  void set(std::size_t i, int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("sign entry");
    bits_.set(i, sign == -1);
  }

  const BitVector& as_bits() const { return bits_; }

  bool operator==(const SignVector& o) const { return bits_ == o.bits_; }

 private:
  BitVector bits_;
};

// Strictly increasing indices in [1, universe_size].
class IndexSubset {
 public:
  IndexSubset() = default;

  IndexSubset(std::vector<std::uint32_t> indices, std::uint32_t universe_size)
      : idx_(std::move(indices)), n_(universe_size) {
    for (std::size_t i = 0; i < idx_.size(); ++i) {
      if (idx_[i] < 1 || idx_[i] > n_)
        throw std::invalid_argument("index outside universe");
      if (i > 0 && idx_[i] <= idx_[i - 1])
        throw std::invalid_argument("indices not strictly increasing");
    }
  }

  static IndexSubset full(std::uint32_t n) {
    std::vector<std::uint32_t> v(n);
    for (std::uint32_t i = 0; i < n; ++i) v[i] = i + 1;
    return IndexSubset(std::move(v), n);
  }

  static IndexSubset from_mask(const BitVector& mask) {
    std::vector<std::uint32_t> v;
    for (std::size_t i = 0; i < mask.size(); ++i)
      if (mask.get(i)) v.push_back(static_cast<std::uint32_t>(i + 1));
    return IndexSubset(std::move(v), static_cast<std::uint32_t>(mask.size()));
  }

  std::size_t size() const { return idx_.size(); }
  std::uint32_t universe_size() const { return n_; }
  const std::vector<std::uint32_t>& indices() const { return idx_; }

  bool contains(std::uint32_t i) const {
    auto it = std::lower_bound(idx_.begin(), idx_.end(), i);
    return it != idx_.end() && *it == i;
  }

  // 0-based indicator vector over [universe_size]
  BitVector mask() const {
    BitVector m(n_);
    for (auto i : idx_) m.set(i - 1, true);
    return m;
  }

  bool operator==(const IndexSubset& o) const {
    return n_ == o.n_ && idx_ == o.idx_;
  }

 private:
  std::vector<std::uint32_t> idx_;
  std::uint32_t n_ = 0;
};

// Strictly increasing integers in [1, bound]; the combinatorial object behind
// shift-game inputs.
class SortedTuple {
 public:
  SortedTuple() = default;

  SortedTuple(std::vector<std::uint32_t> values, std::uint32_t bound)
      : vals_(std::move(values)), bound_(bound) {
    for (std::size_t i = 0; i < vals_.size(); ++i) {
      if (vals_[i] < 1 || vals_[i] > bound_)
        throw std::invalid_argument("tuple value outside bound");
      if (i > 0 && vals_[i] <= vals_[i - 1])
        throw std::invalid_argument("tuple not strictly increasing");
    }
  }

  std::size_t size() const { return vals_.size(); }
  std::uint32_t bound() const { return bound_; }
  const std::vector<std::uint32_t>& values() const { return vals_; }
  std::uint32_t operator[](std::size_t i) const { return vals_[i]; }

  SortedTuple prefix() const {
    return SortedTuple(
        std::vector<std::uint32_t>(vals_.begin(), vals_.end() - 1), bound_);
  }
  SortedTuple suffix() const {
    return SortedTuple(
        std::vector<std::uint32_t>(vals_.begin() + 1, vals_.end()), bound_);
  }

  bool operator==(const SortedTuple& o) const {
    return bound_ == o.bound_ && vals_ == o.vals_;
  }

 private:
  std::vector<std::uint32_t> vals_;
  std::uint32_t bound_ = 0;
};

// k index subsets over a common universe [n].
class SubsetFamily {
 public:
  SubsetFamily() = default;

  SubsetFamily(std::vector<IndexSubset> blocks, std::uint32_t block_size)
      : blocks_(std::move(blocks)), n_(block_size) {
    for (const auto& b : blocks_)
      if (b.universe_size() != n_)
        throw std::invalid_argument("subset universe mismatch");
  }

  std::size_t block_count() const { return blocks_.size(); }
  std::uint32_t block_size() const { return n_; }
  const IndexSubset& block(std::size_t i) const { return blocks_[i]; }
  const std::vector<IndexSubset>& blocks() const { return blocks_; }

  bool operator==(const SubsetFamily& o) const {
    return n_ == o.n_ && blocks_ == o.blocks_;
  }

 private:
  std::vector<IndexSubset> blocks_;
  std::uint32_t n_ = 0;
};

// k blocks of n bits each.
class BitBlockString {
 public:
  BitBlockString() = default;

  BitBlockString(std::size_t k, std::size_t n)
      : blocks_(k, BitVector(n)), n_(n) {}

  explicit BitBlockString(std::vector<BitVector> blocks)
      : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw std::invalid_argument("empty block string");
    n_ = blocks_[0].size();
    for (const auto& b : blocks_)
      if (b.size() != n_) throw std::invalid_argument("ragged block string");
  }

  std::size_t block_count() const { return blocks_.size(); }
  std::size_t block_size() const { return n_; }
  const BitVector& block(std::size_t i) const { return blocks_[i]; }
  BitVector& block_mut(std::size_t i) { return blocks_[i]; }

  bool operator==(const BitBlockString& o) const {
    return blocks_ == o.blocks_;
  }

 private:
  std::vector<BitVector> blocks_;
  std::size_t n_ = 0;
};

}  // namespace uncertlab
