#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace scpseudo {

// Local cloud count of one degree-d check of a degree-m cover:
// A(w_1..w_d) = #{(x_1..x_d) : x_i in {0,1}^m, |x_i| = w_i, sum_i x_i = 0
// coordinatewise mod 2}. Closed form via the parity-character expansion
// A = 2^-m sum_j C(m,j) prod_i K_{w_i}(j;m); cross-checked against direct
// tuple enumeration at construction when 2^{m d} <= 2^20.
class CheckEnumeratorTable {
public:
  CheckEnumeratorTable(int d, int m, std::size_t max_cells = kDefaultMaxCells);

  // Arbitrary nonnegative table with the same indexing, no cloud-count
  // semantics or cross-check. Lets the entropy solver run on synthetic
  // tensors.
  static CheckEnumeratorTable from_values(int d, int m, std::vector<long long> values);

  int d() const { return d_; }
  int m() const { return m_; }
  std::size_t cells() const { return table_.size(); }

  std::size_t index(const std::vector<int>& w) const;
  long long at_index(std::size_t idx) const { return table_[idx]; }
  long long at(const std::vector<int>& w) const { return table_[index(w)]; }

  // Decodes a flat index back to weights (inverse of index()).
  std::vector<int> weights(std::size_t idx) const;

  static constexpr std::size_t kDefaultMaxCells = std::size_t{1} << 24;

private:
  int d_, m_;
  std::vector<long long> table_;
};

} // namespace scpseudo
