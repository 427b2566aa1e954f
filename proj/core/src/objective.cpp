#include "scpseudo/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace scpseudo {

namespace {
constexpr double kInvLn2 = 1.4426950408889634; // 1/ln 2
}

double delta_of(const TypeAssignment& tau) {
  double s = 0;
  for (const auto& t : tau) s += 1.0 - t[0];
  return s / static_cast<double>(tau.size());
}

ObjectiveF::ObjectiveF(const BaseMatrix& B, int m) : B_(B), m_(m) {
  if (m < 1) throw std::invalid_argument("ObjectiveF: m must be >= 1");
  q_.resize(B.vars());
  for (std::size_t y = 0; y < B.vars(); ++y) q_[y] = B.var_degree(y);

  for (std::size_t x = 0; x < B.checks(); ++x) {
    int d = B.check_degree(x);
    if (d == 0) continue; // empty row constrains nothing
    auto [it, fresh] = tables_.try_emplace(d, d, m);
    if (!fresh) continue;
    // Weight vectors are counted once each, so only the support of the count
    // tensor matters. At m = 1 the counts are already 0/1 and this is a no-op.
    CheckEnumeratorTable& tab = it->second;
    std::vector<long long> vals(tab.cells());
    for (std::size_t i = 0; i < tab.cells(); ++i) vals[i] = tab.at_index(i) > 0 ? 1 : 0;
    tab = CheckEnumeratorTable::from_values(d, m, std::move(vals));
  }
  for (std::size_t x = 0; x < B.checks(); ++x) {
    int d = B.check_degree(x);
    if (d == 0) continue;
    CheckNode node{{}, InnerSolver(tables_.at(d))};
    for (std::size_t y = 0; y < B.vars(); ++y)
      for (int u = 0; u < B.at(x, y); ++u) node.socket_var.push_back(static_cast<int>(y));
    checks_.push_back(std::move(node));
  }
}

ObjectiveF::ObjectiveF(const ObjectiveF& o)
    : inner_opts(o.inner_opts), B_(o.B_), m_(o.m_), tables_(o.tables_), q_(o.q_) {
  for (const CheckNode& c : o.checks_) {
    int d = static_cast<int>(c.socket_var.size());
    checks_.push_back(CheckNode{c.socket_var, InnerSolver(tables_.at(d))});
  }
}

void ObjectiveF::reset_state() {
  for (CheckNode& c : checks_) c.solver.reset();
}

ObjectiveEval ObjectiveF::eval(const TypeAssignment& tau, bool with_gradient) {
  if (tau.size() != B_.vars())
    throw std::invalid_argument("ObjectiveF::eval: wrong number of type vectors");

  ObjectiveEval out;
  if (with_gradient) out.gradient.assign(B_.vars(), std::vector<double>(m_ + 1, 0));

  double value = 0;
  for (std::size_t v = 0; v < B_.vars(); ++v) {
    const std::vector<double>& t = tau[v];
    if (static_cast<int>(t.size()) != m_ + 1)
      throw std::invalid_argument("ObjectiveF::eval: type vector has wrong alphabet");
    double coeff = 1.0 - static_cast<double>(q_[v]);
    value += coeff * entropy_bits(t);
    if (with_gradient)
      for (int w = 0; w <= m_; ++w) {
        double lt = t[w] > 1e-300 ? std::log2(t[w]) : std::log2(1e-300);
        out.gradient[v][w] += coeff * (-lt - kInvLn2);
      }
  }

  std::vector<std::vector<double>> marginals;
  for (CheckNode& c : checks_) {
    marginals.clear();
    marginals.reserve(c.socket_var.size());
    for (int v : c.socket_var) marginals.push_back(tau[v]);
    InnerResult r = c.solver.solve(marginals, inner_opts);
    if (r.status == InnerStatus::infeasible) return out; // feasible stays false
    out.worst_inner_residual = std::max(out.worst_inner_residual, r.residual);
    value += r.value;
    if (with_gradient)
      for (std::size_t e = 0; e < c.socket_var.size(); ++e) {
        int v = c.socket_var[e];
        for (int w = 0; w <= m_; ++w) out.gradient[v][w] -= r.duals[e][w];
      }
  }

  out.feasible = true;
  out.value = value;
  return out;
}

} // namespace scpseudo
