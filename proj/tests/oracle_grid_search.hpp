#pragma once

// Independent reference for the inner entropy maximization: maximize
// H(rho) + sum_cells rho*log2(A) over tensors rho with fixed axis marginals.
// Solves the affine marginal constraints by real Gaussian elimination, then
// runs a re-centering zoom grid over the nullspace coefficients. Because the
// entropy gradient blows up toward the boundary, the maximum is interior and
// the zoom converges quadratically in value. Shares no code with the
// production solver on purpose.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "scpseudo/check_enumerator.hpp"

namespace oracle {

struct GridResult {
  bool feasible = false;
  double value = 0; // bits
};

inline GridResult grid_search_entropy_max(const scpseudo::CheckEnumeratorTable& A,
                                          const std::vector<std::vector<double>>& marginals,
                                          int rounds = 10, int pts = 9) {
  const int d = A.d();
  const int m = A.m();
  const std::size_t cells = A.cells();

  // Support: A > 0 and every touched marginal coordinate > 0.
  std::vector<std::size_t> support;
  for (std::size_t idx = 0; idx < cells; ++idx) {
    if (A.at_index(idx) <= 0) continue;
    std::vector<int> w = A.weights(idx);
    bool ok = true;
    for (int i = 0; i < d; ++i)
      if (marginals[i][w[i]] <= 0) ok = false;
    if (ok) support.push_back(idx);
  }
  GridResult out;
  if (support.empty()) {
    // Only consistent when every marginal asks for nothing, which valid
    // distributions cannot; report infeasible.
    return out;
  }

  // Constraint rows: per axis and symbol, sum of rho over matching cells.
  const std::size_t n = support.size();
  std::vector<std::vector<double>> M;
  std::vector<double> rhs;
  for (int i = 0; i < d; ++i)
    for (int w = 0; w <= m; ++w) {
      std::vector<double> row(n, 0.0);
      bool any = false;
      for (std::size_t k = 0; k < n; ++k)
        if (A.weights(support[k])[i] == w) {
          row[k] = 1.0;
          any = true;
        }
      if (!any && marginals[i][w] > 1e-15) return out; // demanded mass, no cells
      M.push_back(std::move(row));
      rhs.push_back(marginals[i][w]);
    }

  // Gaussian elimination with partial pivoting.
  const std::size_t rows = M.size();
  std::vector<int> pivot_col_of_row(rows, -1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < rows; ++c) {
    std::size_t best = r;
    for (std::size_t i = r + 1; i < rows; ++i)
      if (std::abs(M[i][c]) > std::abs(M[best][c])) best = i;
    if (std::abs(M[best][c]) < 1e-10) continue;
    std::swap(M[r], M[best]);
    std::swap(rhs[r], rhs[best]);
    double piv = M[r][c];
    for (std::size_t j = c; j < n; ++j) M[r][j] /= piv;
    rhs[r] /= piv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || std::abs(M[i][c]) < 1e-14) continue;
      double f = M[i][c];
      for (std::size_t j = c; j < n; ++j) M[i][j] -= f * M[r][j];
      rhs[i] -= f * rhs[r];
    }
    pivot_col_of_row[r] = static_cast<int>(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (std::abs(rhs[i]) > 1e-8) return out; // inconsistent: infeasible marginals

  std::vector<bool> is_pivot(n, false);
  for (std::size_t i = 0; i < r; ++i) is_pivot[pivot_col_of_row[i]] = true;

  // Particular solution with free coordinates zero, then one basis vector per
  // free coordinate.
  std::vector<double> part(n, 0.0);
  for (std::size_t i = 0; i < r; ++i) part[pivot_col_of_row[i]] = rhs[i];
  std::vector<std::vector<double>> basis;
  for (std::size_t c = 0; c < n; ++c) {
    if (is_pivot[c]) continue;
    std::vector<double> v(n, 0.0);
    v[c] = 1.0;
    for (std::size_t i = 0; i < r; ++i) v[pivot_col_of_row[i]] = -M[i][c];
    basis.push_back(std::move(v));
  }

  auto value_at = [&](const std::vector<double>& rho) {
    double val = 0;
    for (std::size_t k = 0; k < n; ++k) {
      double p = rho[k];
      if (p <= 0) continue;
      val += p * (std::log2(static_cast<double>(A.at_index(support[k]))) - std::log2(p));
    }
    return val;
  };
  auto feasible_at = [&](const std::vector<double>& rho) {
    for (double p : rho)
      if (p < -1e-9) return false;
    return true;
  };

  const std::size_t k = basis.size();
  if (k == 0) {
    if (!feasible_at(part)) return out;
    for (double& p : part) p = std::max(p, 0.0);
    out.feasible = true;
    out.value = value_at(part);
    return out;
  }

  std::vector<double> center(k, 0.0), width(k, 2.0), coeff(k), best_coeff(k, 0.0);
  std::vector<double> rho(n);
  bool found = false;
  double best_val = 0;
  for (int round = 0; round < rounds; ++round) {
    std::vector<int> ticks(k, 0);
    bool done = false;
    while (!done) {
      for (std::size_t j = 0; j < k; ++j)
        coeff[j] = center[j] + width[j] * (2.0 * ticks[j] / (pts - 1) - 1.0);
      rho = part;
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t c = 0; c < n; ++c) rho[c] += coeff[j] * basis[j][c];
      if (feasible_at(rho)) {
        for (double& p : rho) p = std::max(p, 0.0);
        double v = value_at(rho);
        if (!found || v > best_val) {
          found = true;
          best_val = v;
          best_coeff = coeff;
        }
      }
      for (std::size_t j = 0; j < k; ++j) {
        if (++ticks[j] < pts) break;
        ticks[j] = 0;
        if (j + 1 == k) done = true;
      }
    }
    center = best_coeff;
    for (double& w : width) w *= 0.3;
  }
  out.feasible = found;
  out.value = found ? best_val : 0;
  return out;
}

} // namespace oracle
