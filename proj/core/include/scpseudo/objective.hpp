#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "scpseudo/base_matrix.hpp"
#include "scpseudo/check_enumerator.hpp"
#include "scpseudo/entropy_max.hpp"

namespace scpseudo {

// Per protograph variable node, a distribution over weight symbols {0..m}.
using TypeAssignment = std::vector<std::vector<double>>;

// Pseudoweight fraction (1/b_v) sum_v (1 - tau_v(0)).
double delta_of(const TypeAssignment& tau);

struct ObjectiveEval {
  bool feasible = false;
  double value = 0; // bits per protograph cloud section
  TypeAssignment gradient;
  double worst_inner_residual = 0;
};

// Growth-rate objective of a base matrix at cover degree m:
//   F(tau) = sum_checks a_c(socket marginals) + sum_vars (1 - q_v) H(tau_v)
// where q_v is the variable's total degree and a_c is the inner entropy
// maximization over the couplings supported on the check's realizable weight
// patterns (column-sum vectors of even-row binary m x d matrices). Parallel
// edges contribute one socket each, all carrying the variable's marginal.
//
// F is the exponential growth rate, in the lift size N, of the expected
// number of distinct {0..m} weight assignments whose every lifted check sees
// a realizable local pattern. Weight vectors of degree-m cover codewords are
// counted once each, with no multiplicity for the cover configurations
// behind them, which is why the check tensor enters only through its
// support. At m = 1 the support equals the parity count itself and F reduces
// to the classical protograph weight-enumerator objective.
//
// Holds warm inner-solver state per check, so evals along an optimization
// trajectory get cheap; hence not copyable, and not thread-safe across
// concurrent evals (use one instance per worker).
class ObjectiveF {
public:
  ObjectiveF(const BaseMatrix& B, int m);
  // Copies reuse the already-built (and already cross-checked) tables and get
  // fresh cold solver state; cheap enough to hand one to every worker.
  ObjectiveF(const ObjectiveF& o);
  ObjectiveF& operator=(const ObjectiveF&) = delete;
  ObjectiveF(ObjectiveF&&) = default;
  ObjectiveF& operator=(ObjectiveF&&) = default;

  const BaseMatrix& base() const { return B_; }
  int m() const { return m_; }

  ObjectiveEval eval(const TypeAssignment& tau, bool with_gradient);

  // Forgets warm solver state (use before evaluating an unrelated point).
  void reset_state();

  InnerOptions inner_opts;

private:
  BaseMatrix B_;
  int m_;
  std::map<int, CheckEnumeratorTable> tables_; // keyed by check degree
  struct CheckNode {
    std::vector<int> socket_var;
    InnerSolver solver;
  };
  std::vector<CheckNode> checks_;
  std::vector<int> q_;
};

} // namespace scpseudo
