#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "scpseudo/gf2.hpp"
#include "scpseudo/tanner_graph.hpp"

namespace scpseudo {

// Integer vector in {0..m}^n obtained by summing, per original variable, the
// bits of a codeword living on a degree-m cover.
struct Pseudocodeword {
  std::vector<int> values;
  int cover_degree = 1;

  bool operator==(const Pseudocodeword&) const = default;
};

// w_i = sum of the m copy bits of variable i; copies of variable i occupy
// positions i*m .. i*m+m-1 of the cover codeword.
Pseudocodeword project_pseudocodeword(const BitVec& c, std::size_t m);

// Support size of w.
std::size_t bec_pseudoweight(const Pseudocodeword& w);
std::size_t bec_pseudoweight(const std::vector<int>& values);

struct SearchBudget {
  double max_covers = kDefaultCoverCap;
  std::size_t dimension_cap = kDefaultDimensionCap;
  std::size_t samples = 2000; // random covers when exhaustive search is over budget
  std::uint64_t seed = 0;
};

struct PseudoweightReport {
  std::size_t w_min = 0;
  Pseudocodeword witness;
  bool exhaustive = false;
  std::uint64_t covers_searched = 0;
};

// Minimum BEC pseudoweight over nonzero pseudocodewords of degree-m covers of
// G. Exhaustive over all (m!)^edges covers when that fits budget.max_covers,
// otherwise over budget.samples seeded random covers; all codewords of each
// cover are enumerated either way (dimension_cap applies). Ties on weight are
// broken toward the lexicographically smallest witness.
PseudoweightReport min_pseudoweight(const TannerGraph& G, std::size_t m,
                                    const SearchBudget& budget);

// Zero-pads a pseudocodeword of a length-L terminated code so it indexes the
// variables of a longer window; the pseudoweight is unchanged.
std::vector<int> extend_terminated_pseudocodeword(const std::vector<int>& w,
                                                  std::size_t target_len);

} // namespace scpseudo
