#pragma once

#include <cstddef>
#include <vector>

#include "scpseudo/check_enumerator.hpp"

namespace scpseudo {

enum class InnerStatus {
  converged,  // every axis marginal within tol (total variation)
  loose,      // sweep budget exhausted with small but above-tol residual
  infeasible, // no tensor on supp(A) has the requested marginals
};

struct InnerResult {
  InnerStatus status = InnerStatus::infeasible;
  double value = 0; // bits; valid unless infeasible
  // Per axis, per symbol: log2 of the fixed-point axis factor, shifted to
  // tau-weighted zero mean so the gauge is deterministic. The gradient of the
  // optimal value with respect to tau_e(w) is -duals[e][w] up to a per-axis
  // constant that cancels inside simplex-tangent directions.
  std::vector<std::vector<double>> duals;
  int sweeps = 0;
  double residual = 0;
};

struct InnerOptions {
  double tol = 1e-10;
  int max_sweeps = 20000;
  // Residual above this once the sweep budget is spent is treated as an
  // infeasible marginal request rather than slow convergence.
  double give_up_residual = 1e-5;
};

// Maximizes H(rho) + sum_w rho(w) log2 A(w) over tensors rho >= 0 with the
// given axis marginals, by iterative proportional fitting. At the fixed point
// rho(w) is proportional to A(w) * prod_e u_e(w_e).
//
// The factorized solver never materializes the tensor: it tracks only the u
// factors and evaluates marginals through the parity-character expansion of
// A, at O(d^2 m) per sweep. Signed character sums can cancel; when that is
// detected the dense reference solver takes over.
class InnerSolver {
public:
  explicit InnerSolver(const CheckEnumeratorTable& A);

  // Warm-starts from the previous call's factors when the support pattern of
  // the marginals is unchanged.
  InnerResult solve(const std::vector<std::vector<double>>& marginals,
                    const InnerOptions& opts = {});

  void reset();

private:
  InnerResult solve_factorized(const std::vector<std::vector<double>>& marginals,
                               const InnerOptions& opts, bool& cancelled);

  const CheckEnumeratorTable* A_;
  std::vector<std::vector<long long>> K_; // K_[j][w] = krawtchouk(w, j, m)
  std::vector<long long> binom_;
  std::vector<std::vector<double>> u_;
  bool warm_ = false;
  bool dense_only_ = false; // 0/1 mask table, character expansion inapplicable
  std::vector<double> rho_dense_;               // dense-path warm state
  std::vector<std::vector<double>> duals_dense_;
};

// One-shot cold solves.
InnerResult inner_entropy_max(const CheckEnumeratorTable& A,
                              const std::vector<std::vector<double>>& marginals,
                              const InnerOptions& opts = {});
InnerResult inner_entropy_max_dense(const CheckEnumeratorTable& A,
                                    const std::vector<std::vector<double>>& marginals,
                                    const InnerOptions& opts = {});

// Normalized tensor rho(w) proportional to A(w) * 2^{sum_e duals[e][w_e]},
// laid out in CheckEnumeratorTable flat-index order. Used to verify the KKT
// proportionality and marginal conditions of a solve.
std::vector<double> joint_from_duals(const CheckEnumeratorTable& A,
                                     const std::vector<std::vector<double>>& duals);

// Entropy in bits with the 0 log 0 = 0 convention.
double entropy_bits(const std::vector<double>& p);

} // namespace scpseudo
