#include "scpseudo/check_enumerator.hpp"

#include <bit>
#include <stdexcept>

#include "scpseudo/errors.hpp"
#include "scpseudo/krawtchouk.hpp"

namespace scpseudo {

CheckEnumeratorTable::CheckEnumeratorTable(int d, int m, std::size_t max_cells)
    : d_(d), m_(m) {
  if (d < 1 || m < 1) throw std::invalid_argument("CheckEnumeratorTable: d, m must be >= 1");
  double cells = 1;
  for (int i = 0; i < d; ++i) cells *= m + 1;
  if (cells > static_cast<double>(max_cells))
    throw budget_error("check enumerator table too large", cells,
                       static_cast<double>(max_cells));
  table_.assign(static_cast<std::size_t>(cells), 0);

  std::vector<int> w(d, 0);
  for (std::size_t idx = 0; idx < table_.size(); ++idx) {
    long long sum = 0;
    for (int j = 0; j <= m; ++j) {
      long long prod = binomial(m, j);
      for (int i = 0; i < d && prod != 0; ++i) prod *= krawtchouk(w[i], j, m);
      sum += prod;
    }
    long long denom = 1LL << m;
    if (sum % denom != 0 || sum < 0)
      throw property_error("check enumerator: character sum is not a clean count");
    table_[idx] = sum / denom;
    for (int i = 0; i < d; ++i) {
      if (++w[i] <= m) break;
      w[i] = 0;
    }
  }

  if (static_cast<long long>(m) * d <= 20) {
    // Direct enumeration of all 2^{md} tuples.
    std::vector<long long> brute(table_.size(), 0);
    std::uint64_t total = std::uint64_t{1} << (m * d);
    for (std::uint64_t bits = 0; bits < total; ++bits) {
      std::uint64_t acc = 0;
      std::size_t idx = 0, stride = 1;
      for (int i = 0; i < d; ++i) {
        std::uint64_t x = (bits >> (i * m)) & ((std::uint64_t{1} << m) - 1);
        acc ^= x;
        idx += static_cast<std::size_t>(std::popcount(x)) * stride;
        stride *= m + 1;
      }
      if (acc == 0) ++brute[idx];
    }
    if (brute != table_)
      throw property_error("check enumerator: closed form disagrees with enumeration");
  }
}

CheckEnumeratorTable CheckEnumeratorTable::from_values(int d, int m,
                                                       std::vector<long long> values) {
  CheckEnumeratorTable t(d, m);
  std::size_t cells = 1;
  for (int i = 0; i < d; ++i) cells *= static_cast<std::size_t>(m) + 1;
  if (values.size() != cells)
    throw std::invalid_argument("CheckEnumeratorTable::from_values: wrong cell count");
  for (long long v : values)
    if (v < 0) throw std::invalid_argument("CheckEnumeratorTable::from_values: negative entry");
  t.table_ = std::move(values);
  return t;
}

std::size_t CheckEnumeratorTable::index(const std::vector<int>& w) const {
  if (static_cast<int>(w.size()) != d_)
    throw std::invalid_argument("CheckEnumeratorTable::index: wrong arity");
  std::size_t idx = 0, stride = 1;
  for (int i = 0; i < d_; ++i) {
    if (w[i] < 0 || w[i] > m_)
      throw std::invalid_argument("CheckEnumeratorTable::index: weight out of range");
    idx += static_cast<std::size_t>(w[i]) * stride;
    stride *= m_ + 1;
  }
  return idx;
}

std::vector<int> CheckEnumeratorTable::weights(std::size_t idx) const {
  std::vector<int> w(d_);
  for (int i = 0; i < d_; ++i) {
    w[i] = static_cast<int>(idx % (m_ + 1));
    idx /= m_ + 1;
  }
  return w;
}

} // namespace scpseudo
