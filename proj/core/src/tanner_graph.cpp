#include "scpseudo/tanner_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "scpseudo/rng.hpp"

namespace scpseudo {

void TannerGraph::add_edge(std::uint32_t check, std::uint32_t var) {
  if (check >= n_checks_ || var >= n_vars_)
    throw std::invalid_argument("TannerGraph::add_edge: index out of range");
  edges_.push_back({check, var});
}

std::size_t TannerGraph::check_degree(std::size_t c) const {
  std::size_t d = 0;
  for (const Edge& e : edges_)
    if (e.check == c) ++d;
  return d;
}

std::size_t TannerGraph::var_degree(std::size_t v) const {
  std::size_t d = 0;
  for (const Edge& e : edges_)
    if (e.var == v) ++d;
  return d;
}

BitMatrix TannerGraph::parity_matrix() const {
  BitMatrix H(n_checks_, n_vars_);
  for (const Edge& e : edges_) H.flip(e.check, e.var);
  return H;
}

BaseMatrix TannerGraph::to_base_matrix() const {
  BaseMatrix B(n_checks_, n_vars_);
  for (const Edge& e : edges_) ++B.at(e.check, e.var);
  return B;
}

std::string TannerGraph::to_edge_list() const {
  std::ostringstream out;
  out << "p tanner " << n_checks_ << " " << n_vars_ << " " << edges_.size() << "\n";
  for (const Edge& e : edges_) out << e.check << " " << e.var << "\n";
  return out.str();
}

TannerGraph TannerGraph::from_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::string p, tanner;
  std::size_t n_checks, n_vars, n_edges;
  if (!(in >> p >> tanner >> n_checks >> n_vars >> n_edges) || p != "p" || tanner != "tanner")
    throw std::invalid_argument("edge list: bad header");
  TannerGraph G(n_checks, n_vars);
  for (std::size_t i = 0; i < n_edges; ++i) {
    std::uint32_t c, v;
    if (!(in >> c >> v)) throw std::invalid_argument("edge list: truncated");
    G.add_edge(c, v);
  }
  return G;
}

TannerGraph lift(const BaseMatrix& B, std::size_t N, std::uint64_t seed) {
  if (N < 1) throw std::invalid_argument("lift: N must be >= 1");
  TannerGraph G(B.checks() * N, B.vars() * N);
  Rng rng(seed);
  for (std::size_t x = 0; x < B.checks(); ++x)
    for (std::size_t y = 0; y < B.vars(); ++y)
      for (int u = 0; u < B.at(x, y); ++u) {
        std::vector<std::uint32_t> Q = rng.permutation(static_cast<std::uint32_t>(N));
        for (std::size_t n = 0; n < N; ++n)
          G.add_edge(static_cast<std::uint32_t>(x * N + Q[n]),
                     static_cast<std::uint32_t>(y * N + n));
      }
  return G;
}

TannerGraph cover_with_permutations(const TannerGraph& G, std::size_t m,
                                    const std::vector<std::vector<std::uint32_t>>& perms) {
  if (m < 1) throw std::invalid_argument("cover: m must be >= 1");
  if (perms.size() != G.n_edges())
    throw std::invalid_argument("cover: need one permutation per edge");
  TannerGraph C(G.n_checks() * m, G.n_vars() * m);
  for (std::size_t e = 0; e < G.n_edges(); ++e) {
    const auto& s = perms[e];
    if (s.size() != m) throw std::invalid_argument("cover: permutation size mismatch");
    const TannerGraph::Edge& edge = G.edges()[e];
    for (std::size_t k = 0; k < m; ++k)
      C.add_edge(static_cast<std::uint32_t>(edge.check * m + s[k]),
                 static_cast<std::uint32_t>(edge.var * m + k));
  }
  return C;
}

TannerGraph cover(const TannerGraph& G, std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<std::uint32_t>> perms;
  perms.reserve(G.n_edges());
  for (std::size_t e = 0; e < G.n_edges(); ++e)
    perms.push_back(rng.permutation(static_cast<std::uint32_t>(m)));
  return cover_with_permutations(G, m, perms);
}

double cover_count(std::size_t n_edges, std::size_t m) {
  double fact = 1;
  for (std::size_t k = 2; k <= m; ++k) fact *= static_cast<double>(k);
  return std::pow(fact, static_cast<double>(n_edges));
}

namespace detail {

std::vector<std::vector<std::uint32_t>> all_permutations(std::size_t m) {
  std::vector<std::uint32_t> p(m);
  std::iota(p.begin(), p.end(), 0u);
  std::vector<std::vector<std::uint32_t>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

} // namespace detail

} // namespace scpseudo
