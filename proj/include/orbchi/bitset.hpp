#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <vector>

namespace orbchi {

/// Dense bitset over a fixed universe 0..n-1. Used both for element sets of
/// groups and for point sets of G-sets. Word layout is little-endian, and the
/// unused tail bits of the last word are kept zero so that whole-word
/// comparisons are meaningful.
class Bitset {
public:
  Bitset() = default;
  explicit Bitset(int universe) : n_(universe), w_((universe + 63) / 64, 0) {}

  static Bitset full(int universe) {
    Bitset b(universe);
    for (std::size_t k = 0; k < b.w_.size(); ++k) b.w_[k] = ~std::uint64_t(0);
    b.clear_tail();
    return b;
  }

  static Bitset singleton(int universe, int i) {
    Bitset b(universe);
    b.insert(i);
    return b;
  }

  int universe() const { return n_; }

  bool contains(int i) const {
    assert(i >= 0 && i < n_);
    return (w_[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1u;
  }

  void insert(int i) {
    assert(i >= 0 && i < n_);
    w_[static_cast<std::size_t>(i) >> 6] |= std::uint64_t(1) << (i & 63);
  }

  void erase(int i) {
    assert(i >= 0 && i < n_);
    w_[static_cast<std::size_t>(i) >> 6] &= ~(std::uint64_t(1) << (i & 63));
  }

  int count() const {
    int c = 0;
    for (std::uint64_t w : w_) c += std::popcount(w);
    return c;
  }

  bool empty() const {
    for (std::uint64_t w : w_)
      if (w) return false;
    return true;
  }

  std::vector<int> elements() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count()));
    for (int i = 0; i < n_; ++i)
      if (contains(i)) out.push_back(i);
    return out;
  }

  int min_element() const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k]) return static_cast<int>(k * 64) + std::countr_zero(w_[k]);
    return -1;
  }

  bool is_subset_of(const Bitset& o) const {
    assert(n_ == o.n_);
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & ~o.w_[k]) return false;
    return true;
  }

  Bitset& operator&=(const Bitset& o) {
    assert(n_ == o.n_);
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
    return *this;
  }

  Bitset& operator|=(const Bitset& o) {
    assert(n_ == o.n_);
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
    return *this;
  }

  friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
  friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }

  /// Complement within the universe.
  Bitset complement() const {
    Bitset b(n_);
    for (std::size_t k = 0; k < w_.size(); ++k) b.w_[k] = ~w_[k];
    b.clear_tail();
    return b;
  }

  bool operator==(const Bitset& o) const { return n_ == o.n_ && w_ == o.w_; }
  bool operator!=(const Bitset& o) const { return !(*this == o); }

  /// Total order treating the set as a little-endian integer. Gives a
  /// deterministic tie-break wherever sets of equal size must be sorted.
  bool numeric_less(const Bitset& o) const {
    assert(n_ == o.n_);
    for (std::size_t k = w_.size(); k-- > 0;)
      if (w_[k] != o.w_[k]) return w_[k] < o.w_[k];
    return false;
  }

  bool operator<(const Bitset& o) const {
    if (n_ != o.n_) return n_ < o.n_;
    return numeric_less(o);
  }

private:
  void clear_tail() {
    if (n_ % 64 != 0 && !w_.empty())
      w_.back() &= (std::uint64_t(1) << (n_ % 64)) - 1;
  }

  int n_ = 0;
  std::vector<std::uint64_t> w_;
};

}  // namespace orbchi
