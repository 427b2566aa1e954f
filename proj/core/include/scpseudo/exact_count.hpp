#pragma once

#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "scpseudo/base_matrix.hpp"

namespace scpseudo {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

BigInt big_binomial(int n, int k);
BigInt big_factorial(int n);
// n! / prod parts! ; parts must be nonnegative and sum to n.
BigInt multinomial(int n, const std::vector<int>& parts);

// Ensemble-average number of codewords on degree-m covers of random N-lifts
// of B whose projection puts exactly counts[v][w] of variable v's N lift
// copies at weight w:
//   E = prod_v S_v * prod_c [ Sat_c / prod_{sockets e of c} S_{v(e)} ]
//   S_v = multinomial(N; counts_v) * prod_w C(m,w)^{counts_v(w)}
//   Sat_c = sum over joint count tensors with the sockets' marginal counts of
//           multinomial(N; K) * prod_cells A(w)^{K(w)}
// Exact rational arithmetic throughout.
BigRat exact_average_count(const BaseMatrix& B, int m, int N,
                           const std::vector<std::vector<int>>& counts);

// The same average computed the slow way: enumerate every N-lift permutation
// assignment, every cover permutation assignment, and every codeword of the
// resulting graph. Refuses above roughly `cap` enumerated leaves.
BigRat brute_average_count(const BaseMatrix& B, int m, int N,
                           const std::vector<std::vector<int>>& counts,
                           double cap = 2e6);

} // namespace scpseudo
