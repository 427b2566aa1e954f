#include "scpseudo/gf2.hpp"

namespace scpseudo {

BitVec BitMatrix::multiply(const BitVec& x) const {
  BitVec y(rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    if (row_[r].dot(x)) y.set(r, true);
  return y;
}

bool BitMatrix::in_nullspace(const BitVec& x) const {
  for (std::size_t r = 0; r < rows_; ++r)
    if (row_[r].dot(x)) return false;
  return true;
}

namespace {

// Row-reduces a copy of H and records the pivot column of each nonzero row.
std::vector<std::size_t> reduce(std::vector<BitVec>& rows, std::size_t cols) {
  std::vector<std::size_t> pivot_cols;
  std::size_t lead = 0;
  for (std::size_t c = 0; c < cols && lead < rows.size(); ++c) {
    std::size_t sel = lead;
    while (sel < rows.size() && !rows[sel].get(c)) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[lead], rows[sel]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != lead && rows[r].get(c)) rows[r] ^= rows[lead];
    pivot_cols.push_back(c);
    ++lead;
  }
  return pivot_cols;
}

} // namespace

std::size_t BitMatrix::rank() const {
  std::vector<BitVec> rows = row_;
  return reduce(rows, cols_).size();
}

std::vector<BitVec> nullspace_basis(const BitMatrix& H) {
  std::vector<BitVec> rows;
  rows.reserve(H.rows());
  for (std::size_t r = 0; r < H.rows(); ++r) rows.push_back(H.row(r));
  std::vector<std::size_t> pivot_cols = reduce(rows, H.cols());

  std::vector<bool> is_pivot(H.cols(), false);
  for (std::size_t c : pivot_cols) is_pivot[c] = true;

  std::vector<BitVec> basis;
  for (std::size_t c = 0; c < H.cols(); ++c) {
    if (is_pivot[c]) continue;
    BitVec v(H.cols());
    v.set(c, true);
    // In reduced row echelon form, row i reads x[pivot_i] = sum of free
    // columns present in that row.
    for (std::size_t i = 0; i < pivot_cols.size(); ++i)
      if (rows[i].get(c)) v.set(pivot_cols[i], true);
    basis.push_back(std::move(v));
  }
  return basis;
}

} // namespace scpseudo
