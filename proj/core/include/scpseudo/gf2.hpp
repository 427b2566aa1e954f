#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "scpseudo/errors.hpp"

namespace scpseudo {

// Bit-packed vector over GF(2), 64 coordinates per word.
class BitVec {
public:
  BitVec() = default;
  explicit BitVec(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }

  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

  void set(std::size_t i, bool v) {
    std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (v)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }

  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  BitVec& operator^=(const BitVec& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= o.words_[k];
    return *this;
  }

  bool any() const {
    for (std::uint64_t w : words_)
      if (w) return true;
    return false;
  }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (std::uint64_t w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  // Parity of the AND with another vector of the same length.
  bool dot(const BitVec& o) const {
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < words_.size(); ++k) acc ^= words_[k] & o.words_[k];
    return std::popcount(acc) & 1;
  }

  bool operator==(const BitVec&) const = default;

  const std::vector<std::uint64_t>& words() const { return words_; }

private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

// Dense binary matrix with bit-packed rows.
class BitMatrix {
public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), row_(rows, BitVec(cols)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const { return row_[r].get(c); }
  void set(std::size_t r, std::size_t c, bool v) { row_[r].set(c, v); }
  void flip(std::size_t r, std::size_t c) { row_[r].flip(c); }

  BitVec& row(std::size_t r) { return row_[r]; }
  const BitVec& row(std::size_t r) const { return row_[r]; }

  BitVec multiply(const BitVec& x) const;
  bool in_nullspace(const BitVec& x) const;
  std::size_t rank() const;

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<BitVec> row_;
};

// GF(2) basis of {x : H x = 0}; size is cols(H) - rank(H).
std::vector<BitVec> nullspace_basis(const BitMatrix& H);

inline constexpr std::size_t kDefaultDimensionCap = 24;

// Visits all 2^basis.size() vectors in the span, starting from zero and
// changing one basis vector per step (reflected Gray order). The same object
// is passed to every call; visitors must copy it if they keep it. Returning
// false stops the walk early.
template <class Visit>
void for_each_in_span(std::size_t n, const std::vector<BitVec>& basis, Visit&& visit) {
  BitVec x(n);
  if (!visit(static_cast<const BitVec&>(x))) return;
  std::uint64_t total = std::uint64_t{1} << basis.size();
  for (std::uint64_t k = 1; k < total; ++k) {
    x ^= basis[std::countr_zero(k)];
    if (!visit(static_cast<const BitVec&>(x))) return;
  }
}

// Enumerates the full nullspace of H, refusing when its dimension exceeds the
// cap (2^dim words would not fit a reasonable budget).
template <class Visit>
void for_each_codeword(const BitMatrix& H, std::size_t dimension_cap, Visit&& visit) {
  std::vector<BitVec> basis = nullspace_basis(H);
  if (basis.size() > dimension_cap)
    throw budget_error("nullspace dimension exceeds enumeration cap",
                       static_cast<double>(basis.size()),
                       static_cast<double>(dimension_cap));
  for_each_in_span(H.cols(), basis, visit);
}

} // namespace scpseudo
