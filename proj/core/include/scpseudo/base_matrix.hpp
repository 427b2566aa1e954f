#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace scpseudo {

// Exact fraction with 64-bit components; plenty for design rates.
class Rational {
public:
  Rational() = default;
  Rational(long long num, long long den);

  long long num() const { return num_; }
  long long den() const { return den_; }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  bool operator==(const Rational&) const = default;
  bool operator<(const Rational& o) const;

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

private:
  long long num_ = 0;
  long long den_ = 1;
};

// Nonnegative integer biadjacency matrix of a protograph. Rows are check
// nodes, columns are variable nodes, entries are edge multiplicities.
class BaseMatrix {
public:
  BaseMatrix() = default;
  BaseMatrix(std::size_t b_c, std::size_t b_v);
  static BaseMatrix from_rows(const std::vector<std::vector<int>>& rows);

  std::size_t checks() const { return b_c_; }
  std::size_t vars() const { return b_v_; }

  int at(std::size_t x, std::size_t y) const { return e_[x * b_v_ + y]; }
  int& at(std::size_t x, std::size_t y) { return e_[x * b_v_ + y]; }

  int var_degree(std::size_t y) const;
  int check_degree(std::size_t x) const;
  std::size_t edge_count() const;

  std::vector<std::vector<int>> to_rows() const;
  std::uint64_t hash() const;

  bool operator==(const BaseMatrix&) const = default;

private:
  std::size_t b_c_ = 0, b_v_ = 0;
  std::vector<int> e_;
};

// Ordered component matrices B_0..B_ms of identical shape; their elementwise
// sum is the block base matrix of the coupled ensemble.
struct EdgeSpreading {
  std::vector<BaseMatrix> components;

  std::size_t memory() const { return components.size() - 1; }
  std::size_t checks() const { return components.front().checks(); }
  std::size_t vars() const { return components.front().vars(); }
  BaseMatrix sum() const;
};

// True iff the components sum to B. Shape disagreement is an error, not a
// false result.
bool validate_spreading(const BaseMatrix& B, const EdgeSpreading& spreading);

// Block-banded matrix of the convolutional protograph truncated after L time
// instants: (L+ms)*b_c rows, L*b_v columns; block column t holds B_0..B_ms in
// block rows t..t+ms.
BaseMatrix terminated_base(const EdgeSpreading& spreading, std::size_t L);

// Tail-biting matrix: terminated_base(spreading, lambda) with the last
// b_c*ms rows removed and added onto the first b_c*ms rows. Requires
// lambda >= ms (and lambda >= 1).
BaseMatrix tailbiting_base(const EdgeSpreading& spreading, std::size_t lambda);

enum class CouplingKind { block, unterminated, tailbiting, terminated };

// Design rate: 1 - b_c/b_v except for the terminated construction, where the
// extra check rows cost 1 - ((L+ms)/L)(b_c/b_v). Exact rational arithmetic.
Rational design_rate(const EdgeSpreading& spreading, CouplingKind kind, std::size_t factor);

// JSON round-trip for the spreading input document
// {"b_c":1,"b_v":2,"m_s":1,"components":[[[1,2]],[[2,1]]]}
// and for standalone matrices {"b_c":..,"b_v":..,"rows":[[..]]}.
EdgeSpreading spreading_from_json(const std::string& text);
std::string spreading_to_json(const EdgeSpreading& spreading);
BaseMatrix base_matrix_from_json(const std::string& text);
std::string base_matrix_to_json(const BaseMatrix& B);

} // namespace scpseudo
