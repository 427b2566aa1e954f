#include "scpseudo/pseudocodeword.hpp"

#include <stdexcept>

#include "scpseudo/rng.hpp"

namespace scpseudo {

Pseudocodeword project_pseudocodeword(const BitVec& c, std::size_t m) {
  if (m == 0 || c.size() % m != 0)
    throw std::invalid_argument("project_pseudocodeword: length not divisible by m");
  std::size_t n = c.size() / m;
  Pseudocodeword w;
  w.cover_degree = static_cast<int>(m);
  w.values.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < m; ++k)
      if (c.get(i * m + k)) ++w.values[i];
  return w;
}

std::size_t bec_pseudoweight(const std::vector<int>& values) {
  std::size_t p = 0;
  for (int v : values)
    if (v != 0) ++p;
  return p;
}

std::size_t bec_pseudoweight(const Pseudocodeword& w) { return bec_pseudoweight(w.values); }

namespace {

// Scans every codeword of one cover, folding nonzero projections into the
// running (weight, witness) minimum.
void scan_cover(const TannerGraph& C, std::size_t m, std::size_t dimension_cap,
                PseudoweightReport& best, bool& found) {
  BitMatrix H = C.parity_matrix();
  for_each_codeword(H, dimension_cap, [&](const BitVec& c) {
    if (!c.any()) return true;
    Pseudocodeword w = project_pseudocodeword(c, m);
    std::size_t p = bec_pseudoweight(w);
    if (!found || p < best.w_min ||
        (p == best.w_min && w.values < best.witness.values)) {
      best.w_min = p;
      best.witness = w;
      found = true;
    }
    return true;
  });
}

} // namespace

PseudoweightReport min_pseudoweight(const TannerGraph& G, std::size_t m,
                                    const SearchBudget& budget) {
  PseudoweightReport best;
  bool found = false;
  double total = cover_count(G.n_edges(), m);
  if (total <= budget.max_covers) {
    enumerate_all_covers(G, m, budget.max_covers, [&](const TannerGraph& C) {
      ++best.covers_searched;
      scan_cover(C, m, budget.dimension_cap, best, found);
      return true;
    });
    best.exhaustive = true;
  } else {
    Rng rng(budget.seed);
    for (std::size_t s = 0; s < budget.samples; ++s) {
      TannerGraph C = cover(G, m, rng.raw());
      ++best.covers_searched;
      scan_cover(C, m, budget.dimension_cap, best, found);
    }
    best.exhaustive = false;
  }
  if (!found) {
    // Only the zero codeword exists in every searched cover.
    best.w_min = 0;
    best.witness.values.assign(G.n_vars(), 0);
    best.witness.cover_degree = static_cast<int>(m);
  }
  return best;
}

std::vector<int> extend_terminated_pseudocodeword(const std::vector<int>& w,
                                                  std::size_t target_len) {
  if (target_len < w.size())
    throw std::invalid_argument("extend_terminated_pseudocodeword: target shorter than input");
  std::vector<int> out = w;
  out.resize(target_len, 0);
  return out;
}

} // namespace scpseudo
