#include "scpseudo/exact_count.hpp"

#include <stdexcept>

#include "scpseudo/check_enumerator.hpp"
#include "scpseudo/errors.hpp"
#include "scpseudo/gf2.hpp"
#include "scpseudo/tanner_graph.hpp"

namespace scpseudo {

BigInt big_factorial(int n) {
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

BigInt big_binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

BigInt multinomial(int n, const std::vector<int>& parts) {
  int sum = 0;
  BigInt denom = 1;
  for (int p : parts) {
    if (p < 0) throw std::invalid_argument("multinomial: negative part");
    sum += p;
    denom *= big_factorial(p);
  }
  if (sum != n) throw std::invalid_argument("multinomial: parts do not sum to n");
  return big_factorial(n) / denom;
}

namespace {

void validate_counts(const BaseMatrix& B, int m, int N,
                     const std::vector<std::vector<int>>& counts) {
  if (counts.size() != B.vars())
    throw std::invalid_argument("type counts: need one vector per variable");
  for (const auto& c : counts) {
    if (static_cast<int>(c.size()) != m + 1)
      throw std::invalid_argument("type counts: wrong alphabet size");
    int sum = 0;
    for (int v : c) {
      if (v < 0) throw std::invalid_argument("type counts: negative count");
      sum += v;
    }
    if (sum != N) throw std::invalid_argument("type counts: must sum to N");
  }
}

std::vector<int> check_sockets(const BaseMatrix& B, std::size_t x) {
  std::vector<int> sockets;
  for (std::size_t y = 0; y < B.vars(); ++y)
    for (int u = 0; u < B.at(x, y); ++u) sockets.push_back(static_cast<int>(y));
  return sockets;
}

// Sums multinomial(N; K) * prod_cells A(cell)^K(cell) over all joint count
// tensors K >= 0 with the given per-axis marginal counts, by recursing over
// cells with running marginal tracking.
class SatSum {
public:
  SatSum(const CheckEnumeratorTable& A, const std::vector<std::vector<int>>& targets, int N)
      : A_(A), targets_(targets), N_(N), marg_(targets.size(), std::vector<int>(A.m() + 1, 0)) {}

  BigInt run() {
    total_ = 0;
    term_ = big_factorial(N_);
    recurse(0, N_);
    return total_;
  }

private:
  void recurse(std::size_t cell, int remaining) {
    if (++nodes_ > 50'000'000)
      throw budget_error("joint count tensor enumeration too large", static_cast<double>(nodes_),
                         5e7);
    if (cell == A_.cells()) {
      if (remaining == 0 && marg_ == targets_) total_ += term_;
      return;
    }
    std::vector<int> w = A_.weights(cell);
    long long a = A_.at_index(cell);
    recurse(cell + 1, remaining); // K(cell) = 0
    if (a == 0) return;
    BigInt saved = term_;
    int k = 0;
    while (k < remaining) {
      bool fits = true;
      for (std::size_t e = 0; e < targets_.size(); ++e)
        if (marg_[e][w[e]] + 1 > targets_[e][w[e]]) {
          fits = false;
          break;
        }
      if (!fits) break;
      for (std::size_t e = 0; e < targets_.size(); ++e) ++marg_[e][w[e]];
      ++k;
      // term carries N! * prod A^K / prod K!; the running division is exact.
      term_ = term_ * a / k;
      recurse(cell + 1, remaining - k);
    }
    for (int i = 0; i < k; ++i)
      for (std::size_t e = 0; e < targets_.size(); ++e) --marg_[e][w[e]];
    term_ = saved;
  }

  const CheckEnumeratorTable& A_;
  const std::vector<std::vector<int>>& targets_;
  int N_;
  std::vector<std::vector<int>> marg_;
  BigInt total_ = 0;
  BigInt term_ = 1;
  long long nodes_ = 0;
};

} // namespace

BigRat exact_average_count(const BaseMatrix& B, int m, int N,
                           const std::vector<std::vector<int>>& counts) {
  validate_counts(B, m, N, counts);

  std::vector<BigInt> S(B.vars());
  for (std::size_t v = 0; v < B.vars(); ++v) {
    BigInt s = multinomial(N, counts[v]);
    for (int w = 0; w <= m; ++w) {
      BigInt c = big_binomial(m, w);
      for (int k = 0; k < counts[v][w]; ++k) s *= c;
    }
    S[v] = s;
  }

  BigRat result = 1;
  for (std::size_t v = 0; v < B.vars(); ++v) result *= BigRat(S[v]);

  for (std::size_t x = 0; x < B.checks(); ++x) {
    std::vector<int> sockets = check_sockets(B, x);
    if (sockets.empty()) continue;
    CheckEnumeratorTable A(static_cast<int>(sockets.size()), m);
    std::vector<std::vector<int>> targets;
    targets.reserve(sockets.size());
    for (int v : sockets) targets.push_back(counts[v]);
    SatSum sat(A, targets, N);
    BigInt sat_val = sat.run();
    BigRat denom = 1;
    for (int v : sockets) denom *= BigRat(S[v]);
    result *= BigRat(sat_val) / denom;
  }
  return result;
}

BigRat brute_average_count(const BaseMatrix& B, int m, int N,
                           const std::vector<std::vector<int>>& counts, double cap) {
  validate_counts(B, m, N, counts);

  struct BaseEdge {
    std::size_t x, y;
  };
  std::vector<BaseEdge> base_edges;
  for (std::size_t x = 0; x < B.checks(); ++x)
    for (std::size_t y = 0; y < B.vars(); ++y)
      for (int u = 0; u < B.at(x, y); ++u) base_edges.push_back({x, y});
  std::size_t E = base_edges.size();

  double lift_choices = cover_count(E, N);       // (N!)^E
  double cover_choices = cover_count(E * N, m);  // (m!)^{N E}
  if (lift_choices * cover_choices > cap)
    throw budget_error("brute-force permutation average too large",
                       lift_choices * cover_choices, cap);

  auto lift_perms = detail::all_permutations(N);
  auto cov_perms = detail::all_permutations(m);

  BigInt total = 0;
  BigInt graphs = 0;

  std::vector<std::size_t> lift_choice(E, 0);
  for (;;) {
    // Lifted edges in (base edge, n) order.
    std::vector<std::size_t> cov_choice(E * N, 0);
    for (;;) {
      BitMatrix H(B.checks() * N * m, B.vars() * N * m);
      for (std::size_t e = 0; e < E; ++e) {
        const auto& Q = lift_perms[lift_choice[e]];
        for (std::size_t n = 0; n < static_cast<std::size_t>(N); ++n) {
          const auto& sigma = cov_perms[cov_choice[e * N + n]];
          std::size_t var = base_edges[e].y * N + n;
          std::size_t check = base_edges[e].x * N + Q[n];
          for (std::size_t k = 0; k < static_cast<std::size_t>(m); ++k)
            H.flip(check * m + sigma[k], var * m + k);
        }
      }
      ++graphs;
      for_each_codeword(H, 24, [&](const BitVec& c) {
        std::vector<std::vector<int>> got(B.vars(), std::vector<int>(m + 1, 0));
        for (std::size_t v = 0; v < B.vars(); ++v)
          for (std::size_t n = 0; n < static_cast<std::size_t>(N); ++n) {
            int weight = 0;
            for (std::size_t k = 0; k < static_cast<std::size_t>(m); ++k)
              if (c.get((v * N + n) * m + k)) ++weight;
            ++got[v][weight];
          }
        if (got == counts) ++total;
        return true;
      });

      std::size_t e = E * N;
      bool done = true;
      while (e > 0) {
        --e;
        if (++cov_choice[e] < cov_perms.size()) {
          done = false;
          break;
        }
        cov_choice[e] = 0;
      }
      if (done) break;
    }

    std::size_t e = E;
    bool done = true;
    while (e > 0) {
      --e;
      if (++lift_choice[e] < lift_perms.size()) {
        done = false;
        break;
      }
      lift_choice[e] = 0;
    }
    if (done) break;
  }

  return BigRat(total) / BigRat(graphs);
}

} // namespace scpseudo
