#include "scpseudo/entropy_max.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scpseudo/krawtchouk.hpp"

namespace scpseudo {

namespace {

constexpr double kLogFloor = -996.578428466;  // log2(1e-300)
constexpr double kLogCeil = 996.578428466;

double log2_floor(double x) { return x > 1e-300 ? std::log2(x) : kLogFloor; }

void validate_marginals(const CheckEnumeratorTable& A,
                        std::vector<std::vector<double>>& marginals) {
  if (static_cast<int>(marginals.size()) != A.d())
    throw std::invalid_argument("inner_entropy_max: need one marginal per axis");
  for (auto& tau : marginals) {
    if (static_cast<int>(tau.size()) != A.m() + 1)
      throw std::invalid_argument("inner_entropy_max: marginal has wrong alphabet");
    double sum = 0;
    for (double& p : tau) {
      if (p < 0) {
        if (p < -1e-9) throw std::invalid_argument("inner_entropy_max: negative marginal");
        p = 0;
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6)
      throw std::invalid_argument("inner_entropy_max: marginal does not sum to 1");
    for (double& p : tau) p /= sum;
  }
}

// Shifts each axis's duals to tau-weighted zero mean so the gauge freedom of
// the fixed point does not leak into reported values.
void normalize_duals(std::vector<std::vector<double>>& duals,
                     const std::vector<std::vector<double>>& marginals) {
  for (std::size_t e = 0; e < duals.size(); ++e) {
    double mean = 0;
    for (std::size_t w = 0; w < duals[e].size(); ++w) mean += marginals[e][w] * duals[e][w];
    for (double& v : duals[e]) v -= mean;
  }
}

} // namespace

double entropy_bits(const std::vector<double>& p) {
  double h = 0;
  for (double x : p)
    if (x > 0) h -= x * std::log2(x);
  return h;
}

namespace {

// Dense IPF on the full tensor. When state_rho/state_duals are given and hold
// a fixed point for the same support pattern, iteration resumes from it (the
// duals stay consistent with rho because rho is proportional to
// A * 2^{sum duals} up to a global scalar); otherwise the start is cold.
InnerResult dense_ipf(const CheckEnumeratorTable& A,
                      std::vector<std::vector<double>>& tau, const InnerOptions& opts,
                      std::vector<double>* state_rho,
                      std::vector<std::vector<double>>* state_duals) {
  int d = A.d(), m = A.m();
  std::size_t cells = A.cells();

  std::vector<std::size_t> stride(d);
  {
    std::size_t s = 1;
    for (int e = 0; e < d; ++e) {
      stride[e] = s;
      s *= m + 1;
    }
  }
  auto symbol_of = [&](std::size_t idx, int e) {
    return static_cast<int>((idx / stride[e]) % (m + 1));
  };

  InnerResult res;
  std::vector<double> rho;
  bool warm = false;
  if (state_rho != nullptr && state_rho->size() == cells) {
    rho = *state_rho;
    // Zero out symbols the current marginals exclude; if the saved tensor has
    // no mass where a marginal demands some, fall back to a cold start.
    for (std::size_t idx = 0; idx < cells; ++idx)
      for (int e = 0; e < d && rho[idx] > 0; ++e)
        if (tau[e][symbol_of(idx, e)] == 0) rho[idx] = 0;
    warm = true;
    std::vector<double> mm(m + 1);
    for (int e = 0; e < d && warm; ++e) {
      std::fill(mm.begin(), mm.end(), 0.0);
      for (std::size_t idx = 0; idx < cells; ++idx) mm[symbol_of(idx, e)] += rho[idx];
      for (int w = 0; w <= m; ++w)
        if (tau[e][w] > 0 && mm[w] <= 0) warm = false;
    }
    if (warm) res.duals = *state_duals;
  }
  if (!warm) {
    rho.assign(cells, 0.0);
    double total = 0;
    for (std::size_t idx = 0; idx < cells; ++idx) {
      rho[idx] = static_cast<double>(A.at_index(idx));
      total += rho[idx];
    }
    if (total <= 0) {
      res.status = InnerStatus::infeasible;
      return res;
    }
    for (double& x : rho) x /= total;
    // Zero out symbols the marginals exclude up front; those axis factors are 0.
    for (std::size_t idx = 0; idx < cells; ++idx)
      for (int e = 0; e < d && rho[idx] > 0; ++e)
        if (tau[e][symbol_of(idx, e)] == 0) rho[idx] = 0;
    res.duals.assign(d, std::vector<double>(m + 1, 0));
  }

  std::vector<double> mu(m + 1);

  int sweep = 0;
  double max_res = 1;
  double best_res = 1e30;
  int last_improve = 0;
  for (sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    max_res = 0;
    for (int e = 0; e < d; ++e) {
      std::fill(mu.begin(), mu.end(), 0.0);
      for (std::size_t idx = 0; idx < cells; ++idx) mu[symbol_of(idx, e)] += rho[idx];
      double tv = 0;
      for (int w = 0; w <= m; ++w) tv += std::abs(mu[w] - tau[e][w]);
      tv *= 0.5;
      max_res = std::max(max_res, tv);
      for (int w = 0; w <= m; ++w) {
        if (tau[e][w] > 0 && mu[w] <= 0) {
          res.status = InnerStatus::infeasible;
          res.sweeps = sweep;
          res.residual = tv;
          return res;
        }
      }
      std::vector<double> factor(m + 1, 0);
      for (int w = 0; w <= m; ++w)
        if (mu[w] > 0) {
          factor[w] = tau[e][w] / mu[w];
          if (tau[e][w] > 0) res.duals[e][w] += std::log2(factor[w]);
        }
      for (std::size_t idx = 0; idx < cells; ++idx)
        if (rho[idx] > 0) rho[idx] *= factor[symbol_of(idx, e)];
    }
    if (max_res < opts.tol) break;
    // Same stall heuristic as the factorized path: a residual pinned above
    // the give-up level signals an unreachable marginal request.
    if (max_res < 0.99 * best_res) {
      best_res = max_res;
      last_improve = sweep;
    } else if (sweep - last_improve > 120 && max_res > opts.give_up_residual) {
      res.status = InnerStatus::infeasible;
      res.sweeps = sweep + 1;
      res.residual = max_res;
      return res;
    }
    if ((sweep & 31) == 31) {
      double s = 0;
      for (double x : rho) s += x;
      for (double& x : rho) x /= s;
    }
  }

  double s = 0;
  for (double x : rho) s += x;
  for (double& x : rho) x /= s;

  double value = 0;
  for (std::size_t idx = 0; idx < cells; ++idx)
    if (rho[idx] > 0)
      value += rho[idx] * (std::log2(static_cast<double>(A.at_index(idx))) - std::log2(rho[idx]));

  res.value = value;
  res.sweeps = std::min(sweep + 1, opts.max_sweeps);
  res.residual = max_res;
  if (max_res < opts.tol)
    res.status = InnerStatus::converged;
  else if (max_res <= opts.give_up_residual)
    res.status = InnerStatus::loose;
  else {
    res.status = InnerStatus::infeasible;
    return res;
  }

  // Boundary symbols: flag structurally unreachable ones with a large
  // positive dual (gradient pushes mass away), reachable ones with the floor
  // (gradient pulls mass in, matching the one-sided derivative).
  for (int e = 0; e < d; ++e)
    for (int w = 0; w <= m; ++w) {
      if (tau[e][w] > 0) continue;
      bool reachable = false;
      for (std::size_t idx = 0; idx < cells && !reachable; ++idx) {
        if (A.at_index(idx) == 0 || symbol_of(idx, e) != w) continue;
        bool others = true;
        for (int i = 0; i < d && others; ++i)
          if (i != e && tau[i][symbol_of(idx, i)] == 0) others = false;
        reachable = others;
      }
      res.duals[e][w] = reachable ? kLogFloor : kLogCeil;
    }
  normalize_duals(res.duals, tau);
  if (state_rho != nullptr) {
    *state_rho = rho;
    *state_duals = res.duals;
  }
  return res;
}

} // namespace

InnerResult inner_entropy_max_dense(const CheckEnumeratorTable& A,
                                    const std::vector<std::vector<double>>& marginals_in,
                                    const InnerOptions& opts) {
  std::vector<std::vector<double>> tau = marginals_in;
  validate_marginals(A, tau);
  return dense_ipf(A, tau, opts, nullptr, nullptr);
}

InnerSolver::InnerSolver(const CheckEnumeratorTable& A) : A_(&A) {
  int m = A.m();
  K_.assign(m + 1, std::vector<long long>(m + 1));
  binom_.assign(m + 1, 0);
  for (int j = 0; j <= m; ++j) {
    binom_[j] = binomial(m, j);
    for (int w = 0; w <= m; ++w) K_[j][w] = krawtchouk(w, j, m);
  }
  // The character expansion behind the factorized path reproduces the count
  // tables; 0/1 support masks (m >= 2) do not have that structure and must go
  // through the dense solver.
  if (m >= 2) {
    dense_only_ = true;
    for (std::size_t i = 0; i < A.cells() && dense_only_; ++i)
      if (A.at_index(i) > 1) dense_only_ = false;
  }
  reset();
}

void InnerSolver::reset() {
  u_.clear();
  warm_ = false;
  rho_dense_.clear();
  duals_dense_.clear();
}

InnerResult InnerSolver::solve_factorized(const std::vector<std::vector<double>>& tau,
                                          const InnerOptions& opts, bool& cancelled) {
  cancelled = false;
  int d = A_->d(), m = A_->m();
  const double twoM = std::ldexp(1.0, m);

  bool restart = !warm_ || static_cast<int>(u_.size()) != d;
  if (!restart) {
    for (int e = 0; e < d && !restart; ++e)
      for (int w = 0; w <= m; ++w)
        if ((tau[e][w] > 0) != (u_[e][w] > 0)) {
          restart = true;
          break;
        }
  }
  if (restart) u_ = tau;

  // S[e][j] = sum_w K_{w}(j) u_e(w)
  std::vector<std::vector<double>> S(d, std::vector<double>(m + 1, 0));
  auto refresh_S = [&](int e) {
    for (int j = 0; j <= m; ++j) {
      double s = 0;
      for (int w = 0; w <= m; ++w) s += static_cast<double>(K_[j][w]) * u_[e][w];
      S[e][j] = s;
    }
  };
  for (int e = 0; e < d; ++e) refresh_S(e);

  InnerResult res;
  res.duals.assign(d, std::vector<double>(m + 1, 0));
  std::vector<double> P(m + 1), cond(m + 1), mu(m + 1);

  int sweep = 0;
  double max_res = 1;
  double best_res = 1e30;
  int last_improve = 0;
  for (sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    max_res = 0;
    for (int e = 0; e < d; ++e) {
      for (int j = 0; j <= m; ++j) {
        double p = static_cast<double>(binom_[j]);
        for (int i = 0; i < d; ++i)
          if (i != e) p *= S[i][j];
        P[j] = p;
      }
      double Z = 0, Zabs = 0;
      for (int j = 0; j <= m; ++j) {
        double t = P[j] * S[e][j];
        Z += t;
        Zabs += std::abs(t);
      }
      Z /= twoM;
      Zabs /= twoM;
      if (!(Z > 0) || Z < 1e-9 * Zabs) {
        cancelled = true;
        return res;
      }
      for (int w = 0; w <= m; ++w) {
        double c = 0, cabs = 0;
        for (int j = 0; j <= m; ++j) {
          double t = P[j] * static_cast<double>(K_[j][w]);
          c += t;
          cabs += std::abs(t);
        }
        c /= twoM;
        cabs /= twoM;
        if (c < 0) {
          if (-c > 1e-9 * cabs && tau[e][w] > 0) {
            cancelled = true;
            return res;
          }
          c = 0;
        }
        cond[w] = c;
      }
      double tv = 0;
      for (int w = 0; w <= m; ++w) {
        mu[w] = u_[e][w] * cond[w] / Z;
        tv += std::abs(mu[w] - tau[e][w]);
      }
      tv *= 0.5;
      max_res = std::max(max_res, tv);

      double usum = 0;
      for (int w = 0; w <= m; ++w) {
        if (tau[e][w] <= 0) {
          u_[e][w] = 0;
        } else {
          if (cond[w] <= 0) {
            res.status = InnerStatus::infeasible;
            res.sweeps = sweep;
            res.residual = tv;
            return res;
          }
          u_[e][w] = tau[e][w] / cond[w];
        }
        usum += u_[e][w];
      }
      for (int w = 0; w <= m; ++w) u_[e][w] /= usum;
      refresh_S(e);
    }
    if (max_res < opts.tol) break;
    // A residual that stalls well above tol means the marginal polytope does
    // not contain the request; stop instead of burning the sweep budget.
    if (max_res < 0.99 * best_res) {
      best_res = max_res;
      last_improve = sweep;
    } else if (sweep - last_improve > 120 && max_res > opts.give_up_residual) {
      res.status = InnerStatus::infeasible;
      res.sweeps = sweep + 1;
      res.residual = max_res;
      return res;
    }
  }

  double Z = 0, Zabs = 0;
  for (int j = 0; j <= m; ++j) {
    double p = static_cast<double>(binom_[j]);
    for (int i = 0; i < d; ++i) p *= S[i][j];
    Z += p;
    Zabs += std::abs(p);
  }
  Z /= twoM;
  Zabs /= twoM;
  if (!(Z > 0) || Z < 1e-9 * Zabs) {
    cancelled = true;
    return res;
  }

  double value = std::log2(Z);
  for (int e = 0; e < d; ++e)
    for (int w = 0; w <= m; ++w)
      if (tau[e][w] > 0) value -= tau[e][w] * std::log2(u_[e][w]);

  res.value = value;
  res.sweeps = std::min(sweep + 1, opts.max_sweeps);
  res.residual = max_res;
  if (max_res < opts.tol)
    res.status = InnerStatus::converged;
  else if (max_res <= opts.give_up_residual)
    res.status = InnerStatus::loose;
  else {
    res.status = InnerStatus::infeasible;
    return res;
  }

  for (int e = 0; e < d; ++e) {
    // Post-update conditionals for the boundary-symbol duals.
    for (int j = 0; j <= m; ++j) {
      double p = static_cast<double>(binom_[j]);
      for (int i = 0; i < d; ++i)
        if (i != e) p *= S[i][j];
      P[j] = p;
    }
    for (int w = 0; w <= m; ++w) {
      if (tau[e][w] > 0) {
        res.duals[e][w] = log2_floor(u_[e][w]);
      } else {
        double c = 0;
        for (int j = 0; j <= m; ++j) c += P[j] * static_cast<double>(K_[j][w]);
        res.duals[e][w] = c / twoM > 1e-14 * Zabs ? kLogFloor : kLogCeil;
      }
    }
  }
  normalize_duals(res.duals, tau);
  warm_ = true;
  return res;
}

InnerResult InnerSolver::solve(const std::vector<std::vector<double>>& marginals_in,
                               const InnerOptions& opts) {
  std::vector<std::vector<double>> tau = marginals_in;
  validate_marginals(*A_, tau);
  if (!dense_only_) {
    bool cancelled = false;
    InnerResult res = solve_factorized(tau, opts, cancelled);
    if (!cancelled) return res;
    warm_ = false;
  }
  return dense_ipf(*A_, tau, opts, &rho_dense_, &duals_dense_);
}

InnerResult inner_entropy_max(const CheckEnumeratorTable& A,
                              const std::vector<std::vector<double>>& marginals,
                              const InnerOptions& opts) {
  InnerSolver solver(A);
  return solver.solve(marginals, opts);
}

std::vector<double> joint_from_duals(const CheckEnumeratorTable& A,
                                     const std::vector<std::vector<double>>& duals) {
  int d = A.d(), m = A.m();
  std::vector<double> rho(A.cells(), 0);
  double total = 0;
  for (std::size_t idx = 0; idx < rho.size(); ++idx) {
    if (A.at_index(idx) == 0) continue;
    double ex = 0;
    std::size_t rest = idx;
    for (int e = 0; e < d; ++e) {
      ex += duals[e][rest % (m + 1)];
      rest /= m + 1;
    }
    ex = std::clamp(ex, 4 * kLogFloor, 1000.0);
    rho[idx] = static_cast<double>(A.at_index(idx)) * std::exp2(ex);
    total += rho[idx];
  }
  if (total > 0)
    for (double& x : rho) x /= total;
  return rho;
}

} // namespace scpseudo
