#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "scpseudo/base_matrix.hpp"
#include "scpseudo/gf2.hpp"

namespace scpseudo {

// Explicit bipartite multigraph. Parallel edges are kept as separate entries:
// the GF(2) parity matrix cancels them pairwise, but covers permute each edge
// independently, so the multiset is the authoritative representation.
class TannerGraph {
public:
  struct Edge {
    std::uint32_t check;
    std::uint32_t var;
  };

  TannerGraph() = default;
  TannerGraph(std::size_t n_checks, std::size_t n_vars)
      : n_checks_(n_checks), n_vars_(n_vars) {}

  std::size_t n_checks() const { return n_checks_; }
  std::size_t n_vars() const { return n_vars_; }
  std::size_t n_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  void add_edge(std::uint32_t check, std::uint32_t var);

  std::size_t check_degree(std::size_t c) const;
  std::size_t var_degree(std::size_t v) const;

  // Binary parity-check matrix; a pair of parallel edges contributes 0.
  BitMatrix parity_matrix() const;

  // One-to-one protograph view: entry (x,y) counts edges between check x and
  // variable y.
  BaseMatrix to_base_matrix() const;

  // Edge-list text format: header "p tanner <n_checks> <n_vars> <n_edges>"
  // followed by one "c v" line per edge (0-based indices).
  std::string to_edge_list() const;
  static TannerGraph from_edge_list(const std::string& text);

  bool operator==(const TannerGraph&) const = default;

private:
  std::size_t n_checks_ = 0, n_vars_ = 0;
  std::vector<Edge> edges_;
};

// Expands each protograph edge of B into N edges matched by an independent
// uniformly random N-permutation: base edge (x, y) copy u with permutation Q
// connects variable y*N + n to check x*N + Q[n]. Permutations are drawn in
// row-major entry order, copies innermost, so the graph is a pure function of
// (B, N, seed).
TannerGraph lift(const BaseMatrix& B, std::size_t N, std::uint64_t seed);

// Degree-m cover with one explicit m-permutation per edge of G, in edge
// order: edge (c, v) with permutation s connects variable copy v*m + k to
// check copy c*m + s[k]. Copies of a node are laid out contiguously.
TannerGraph cover_with_permutations(const TannerGraph& G, std::size_t m,
                                    const std::vector<std::vector<std::uint32_t>>& perms);

// Random degree-m cover, one uniform m-permutation per edge in edge order.
TannerGraph cover(const TannerGraph& G, std::size_t m, std::uint64_t seed);

// Number of degree-m covers (m!)^edges, or nullopt-like overflow guard via
// the return of 0 when it exceeds 2^63. Helper for budget checks.
double cover_count(std::size_t n_edges, std::size_t m);

inline constexpr double kDefaultCoverCap = 1e7;

// Visits every degree-m cover of G exactly once: each edge's permutation runs
// through the m! permutations in lexicographic order, last edge fastest.
// Refuses when (m!)^edges exceeds the cap. Returning false stops the walk.
template <class Visit>
void enumerate_all_covers(const TannerGraph& G, std::size_t m, double cap, Visit&& visit);

namespace detail {
std::vector<std::vector<std::uint32_t>> all_permutations(std::size_t m);
}

template <class Visit>
void enumerate_all_covers(const TannerGraph& G, std::size_t m, double cap, Visit&& visit) {
  double total = cover_count(G.n_edges(), m);
  if (total > cap)
    throw budget_error("cover enumeration exceeds cap", total, cap);
  std::vector<std::vector<std::uint32_t>> perms = detail::all_permutations(m);
  std::vector<std::size_t> choice(G.n_edges(), 0);
  std::vector<std::vector<std::uint32_t>> assigned(G.n_edges(), perms[0]);
  for (;;) {
    if (!visit(cover_with_permutations(G, m, assigned))) return;
    std::size_t e = G.n_edges();
    while (e > 0) {
      --e;
      if (++choice[e] < perms.size()) {
        assigned[e] = perms[choice[e]];
        break;
      }
      choice[e] = 0;
      assigned[e] = perms[0];
      if (e == 0) return;
    }
    if (G.n_edges() == 0) return;
  }
}

} // namespace scpseudo
