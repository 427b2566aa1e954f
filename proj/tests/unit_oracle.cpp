#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "scpseudo/base_matrix.hpp"
#include "scpseudo/convolutional_instance.hpp"
#include "scpseudo/errors.hpp"
#include "scpseudo/gf2.hpp"
#include "scpseudo/pseudocodeword.hpp"
#include "scpseudo/rng.hpp"
#include "scpseudo/tanner_graph.hpp"

using namespace scpseudo;

namespace {

EdgeSpreading spreading_ones() {
  EdgeSpreading sp;
  sp.components = {BaseMatrix::from_rows({{1, 1}}), BaseMatrix::from_rows({{1, 1}})};
  return sp;
}

EdgeSpreading spreading36() {
  EdgeSpreading sp;
  sp.components = {BaseMatrix::from_rows({{1, 2}}), BaseMatrix::from_rows({{2, 1}})};
  return sp;
}

BitVec from_bits(const std::vector<int>& bits) {
  BitVec v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) v.set(i, true);
  return v;
}

// The worked wrapping instance: lambda=2, J=3, N=1, m=2, period-1 cover
// permutations (id, id, id, swap) in slot order.
ConvolutionalInstance worked_instance() {
  ConvolutionalInstance::Tables tables;
  tables.lift = {{0}, {0}, {0}, {0}};
  tables.cover = {{0, 1}, {0, 1}, {0, 1}, {1, 0}};
  return ConvolutionalInstance::with_tables(spreading_ones(), 2, 3, 1, 2, 1,
                                            std::move(tables));
}

const std::vector<int> kWorkedBits = {1, 0, 1, 0, 1, 1, 0, 0, 0, 1, 1, 0,
                                      0, 1, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0};

} // namespace

TEST_CASE("nullspace_basis on hand-checked matrices") {
  BitMatrix H(1, 2);
  H.set(0, 0, true);
  H.set(0, 1, true);
  auto basis = nullspace_basis(H);
  REQUIRE(basis.size() == 1);
  CHECK(basis[0] == from_bits({1, 1}));

  BitMatrix I(4, 4);
  for (int i = 0; i < 4; ++i) I.set(i, i, true);
  CHECK(nullspace_basis(I).empty());
}

TEST_CASE("nullspace_basis spans exactly the nullspace (checked against all 2^8 vectors)") {
  TannerGraph G = lift(tailbiting_base(spreading_ones(), 2), 1, 1);
  TannerGraph C = cover(G, 2, 5);
  BitMatrix H = C.parity_matrix();
  REQUIRE(H.cols() == 8);
  auto basis = nullspace_basis(H);
  CHECK(basis.size() == 8 - H.rank());

  std::set<std::vector<std::uint64_t>> span;
  for_each_in_span(8, basis, [&](const BitVec& x) {
    CHECK(H.in_nullspace(x));
    span.insert(x.words());
    return true;
  });
  CHECK(span.size() == (std::size_t{1} << basis.size()));

  std::size_t null_count = 0;
  for (std::uint32_t word = 0; word < 256; ++word) {
    BitVec x(8);
    for (int i = 0; i < 8; ++i)
      if ((word >> i) & 1) x.set(i, true);
    if (H.in_nullspace(x)) {
      ++null_count;
      CHECK(span.count(x.words()) == 1);
    }
  }
  CHECK(null_count == span.size());
}

TEST_CASE("for_each_codeword refuses oversized nullspaces") {
  BitMatrix H(1, 30); // dimension 29 > default cap 24
  H.set(0, 0, true);
  CHECK_THROWS_AS(for_each_codeword(H, kDefaultDimensionCap,
                                    [](const BitVec&) { return true; }),
                  budget_error);
}

TEST_CASE("project_pseudocodeword reproduces the worked example") {
  Pseudocodeword w = project_pseudocodeword(from_bits(kWorkedBits), 2);
  CHECK(w.values == std::vector<int>{1, 1, 2, 0, 1, 1, 1, 1, 1, 1, 0, 0});
  CHECK(bec_pseudoweight(w) == 9);

  CHECK(project_pseudocodeword(BitVec(6), 2).values == std::vector<int>{0, 0, 0});
  BitVec c3 = from_bits({1, 0, 1});
  CHECK(project_pseudocodeword(c3, 1).values == std::vector<int>{1, 0, 1});
  CHECK_THROWS_AS(project_pseudocodeword(from_bits({1, 0, 1}), 2), std::invalid_argument);
}

TEST_CASE("bec_pseudoweight counts the support") {
  CHECK(bec_pseudoweight(std::vector<int>{1, 1, 2, 0, 1, 1, 1, 1, 1, 1, 0, 0}) == 9);
  CHECK(bec_pseudoweight(std::vector<int>{1, 1, 1, 1}) == 4);
  CHECK(bec_pseudoweight(std::vector<int>{0, 0, 0}) == 0);
}

TEST_CASE("min_pseudoweight at m=1 equals the minimum distance") {
  TannerGraph G = lift(BaseMatrix::from_rows({{3, 3}}), 3, 21);
  BitMatrix H = G.parity_matrix();
  std::size_t dmin = SIZE_MAX;
  for_each_codeword(H, kDefaultDimensionCap, [&](const BitVec& c) {
    if (c.any()) dmin = std::min(dmin, c.popcount());
    return true;
  });
  SearchBudget budget;
  PseudoweightReport rep = min_pseudoweight(G, 1, budget);
  CHECK(rep.exhaustive);
  CHECK(rep.w_min == dmin);
  CHECK(bec_pseudoweight(rep.witness) == rep.w_min);
}

TEST_CASE("min_pseudoweight never exceeds a base codeword weight") {
  // The tail-biting parity matrix has two equal rows, so [1,1,0,0] is a
  // codeword of the base graph; its copies in any cover project onto it.
  TannerGraph G = lift(tailbiting_base(spreading_ones(), 2), 1, 1);
  CHECK(G.parity_matrix().in_nullspace(from_bits({1, 1, 0, 0})));
  SearchBudget budget;
  PseudoweightReport rep = min_pseudoweight(G, 2, budget);
  CHECK(rep.w_min <= 2);
}

TEST_CASE("exhaustive pseudoweight search on the worked tail-biting graph") {
  TannerGraph G = lift(tailbiting_base(spreading_ones(), 2), 1, 1);
  SearchBudget budget;
  PseudoweightReport rep = min_pseudoweight(G, 2, budget);
  CHECK(rep.exhaustive);
  CHECK(rep.covers_searched == 256); // (2!)^8
  CHECK(rep.w_min == 2);
  CHECK(rep.witness.values == std::vector<int>{0, 0, 1, 1});
}

TEST_CASE("sampled mode reports itself and keeps witness consistency") {
  TannerGraph G = lift(BaseMatrix::from_rows({{3, 3}}), 2, 2);
  SearchBudget budget;
  budget.max_covers = 16; // force sampling: (2!)^12 covers exist
  budget.samples = 40;
  PseudoweightReport rep = min_pseudoweight(G, 2, budget);
  CHECK_FALSE(rep.exhaustive);
  CHECK(rep.covers_searched == 40);
  CHECK(rep.w_min > 0);
  CHECK(bec_pseudoweight(rep.witness) == rep.w_min);

  PseudoweightReport again = min_pseudoweight(G, 2, budget);
  CHECK(again.w_min == rep.w_min);
  CHECK(again.witness.values == rep.witness.values);
}

TEST_CASE("wrap_codeword matches the worked example") {
  BitVec c = from_bits(kWorkedBits);
  BitVec wrapped = wrap_codeword(c, 2, 1, 2, 2);
  CHECK(wrapped == from_bits({1, 0, 1, 0, 1, 0, 0, 1}));

  // Support within the first period: wrap is the prefix.
  BitVec prefix(24);
  prefix.set(0, true);
  prefix.set(5, true);
  BitVec pw = wrap_codeword(prefix, 2, 1, 2, 2);
  CHECK(pw == from_bits({1, 0, 0, 0, 0, 1, 0, 0}));

  CHECK_FALSE(wrap_codeword(BitVec(24), 2, 1, 2, 2).any());
  CHECK_THROWS_AS(wrap_codeword(BitVec(23), 2, 1, 2, 2), std::invalid_argument);
}

TEST_CASE("worked instance wraps into the tail-biting cover") {
  ConvolutionalInstance inst = worked_instance();
  BitVec c = from_bits(kWorkedBits);
  REQUIRE(inst.is_window_cover_codeword(c));

  BitVec wrapped = inst.wrap(c);
  CHECK(inst.is_tailbiting_cover_codeword(wrapped));
  Pseudocodeword what = inst.wrap_pseudocodeword(c);
  CHECK(what.values == std::vector<int>{1, 1, 1, 1});
  CHECK(bec_pseudoweight(what) == 4);
  CHECK(bec_pseudoweight(project_pseudocodeword(c, 2)) == 9);
}

TEST_CASE("wrap property holds over many sampled instances") {
  // Lemma-style sweep: every restricted window-cover codeword wraps into the
  // tail-biting cover with no pseudoweight increase.
  std::size_t checked = 0;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    for (std::size_t lambda : {2, 3}) {
      for (std::size_t N : {1, 2}) {
        for (std::size_t m : {2, 3}) {
          for (std::size_t T : {std::size_t{1}, lambda}) {
            auto inst = ConvolutionalInstance::random(spreading_ones(), lambda, 3, N, m,
                                                      T, seed);
            auto basis = inst.restricted_window_basis();
            if (basis.empty()) continue;
            Rng rng(mix_seed(seed, lambda * 100 + N * 10 + m + T));
            for (int s = 0; s < 12; ++s) {
              BitVec c(basis.front().size());
              for (const auto& b : basis)
                if (rng.below(2)) c ^= b;
              if (!c.any()) continue;
              REQUIRE(inst.is_window_cover_codeword(c));
              BitVec wrapped = inst.wrap(c); // throws if parity fails
              CHECK(inst.is_tailbiting_cover_codeword(wrapped));
              CHECK(bec_pseudoweight(inst.wrap_pseudocodeword(c)) <=
                    bec_pseudoweight(project_pseudocodeword(c, m)));
              ++checked;
            }
          }
        }
      }
    }
  }
  CHECK(checked >= 400);
}

TEST_CASE("tail-biting minimum bounds wrapped window codewords, table by table") {
  // For each periodic cover-table choice of the worked shape, wrapping any
  // nonzero-wrapping window codeword cannot beat the tail-biting minimum.
  auto perms2 = std::vector<std::vector<std::uint32_t>>{{0, 1}, {1, 0}};
  std::size_t instances = 0;
  for (int mask = 0; mask < 16; ++mask) {
    ConvolutionalInstance::Tables tables;
    tables.lift = {{0}, {0}, {0}, {0}};
    for (int slot = 0; slot < 4; ++slot)
      tables.cover.push_back(perms2[(mask >> slot) & 1]);
    auto inst = ConvolutionalInstance::with_tables(spreading_ones(), 2, 2, 1, 2, 1,
                                                   std::move(tables));

    // Exhaustive tail-biting cover minimum for this table choice.
    BitMatrix Htb = inst.tailbiting_cover().parity_matrix();
    std::size_t tb_min = SIZE_MAX;
    for_each_codeword(Htb, kDefaultDimensionCap, [&](const BitVec& c) {
      if (!c.any()) return true;
      std::size_t p = bec_pseudoweight(project_pseudocodeword(c, 2));
      tb_min = std::min(tb_min, p);
      return true;
    });
    REQUIRE(tb_min != SIZE_MAX);

    BitMatrix Hw = inst.window_cover().parity_matrix();
    for_each_codeword(Hw, kDefaultDimensionCap, [&](const BitVec& c) {
      if (!c.any()) return true;
      BitVec wrapped = inst.wrap(c);
      if (wrapped.any())
        CHECK(bec_pseudoweight(project_pseudocodeword(wrapped, 2)) >= tb_min);
      return true;
    });
    ++instances;
  }
  CHECK(instances == 16);
}

TEST_CASE("terminated cover codewords zero-extend into longer windows") {
  for (std::uint64_t seed : {3u, 4u, 9u}) {
    auto shorter = ConvolutionalInstance::random(spreading36(), 2, 2, 1, 2, 1, seed);
    auto longer = ConvolutionalInstance::random(spreading36(), 2, 3, 1, 2, 1, seed);
    // Same seed and table shape: the longer window extends the same periodic
    // permutations.
    BitMatrix Hshort = shorter.window_cover().parity_matrix();
    std::size_t target = longer.window_cover().n_vars();
    std::size_t found = 0;
    for_each_codeword(Hshort, kDefaultDimensionCap, [&](const BitVec& c) {
      BitVec padded(target);
      for (std::size_t i = 0; i < c.size(); ++i)
        if (c.get(i)) padded.set(i, true);
      CHECK(longer.is_window_cover_codeword(padded));

      auto w = project_pseudocodeword(c, 2);
      auto ext = extend_terminated_pseudocodeword(w.values, target / 2);
      CHECK(bec_pseudoweight(ext) == bec_pseudoweight(w));
      ++found;
      return found < 200;
    });
    CHECK(found > 1);
  }
}

TEST_CASE("extend_terminated_pseudocodeword pads with zeros") {
  auto ext = extend_terminated_pseudocodeword({1, 1, 0, 2}, 8);
  CHECK(ext == std::vector<int>{1, 1, 0, 2, 0, 0, 0, 0});
  CHECK(bec_pseudoweight(ext) == 3);
  CHECK(extend_terminated_pseudocodeword({0, 0}, 4) == std::vector<int>{0, 0, 0, 0});
  CHECK_THROWS_AS(extend_terminated_pseudocodeword({1, 1, 1}, 2), std::invalid_argument);
}

TEST_CASE("with_tables validates shapes") {
  ConvolutionalInstance::Tables tables;
  tables.lift = {{0}, {0}, {0}, {0}};
  tables.cover = {{0, 1}, {0, 1}, {0, 1}, {1, 0}};
  auto ok = tables;
  CHECK_NOTHROW(ConvolutionalInstance::with_tables(spreading_ones(), 2, 3, 1, 2, 1,
                                                   std::move(ok)));
  // T must divide lambda.
  auto bad_t = tables;
  CHECK_THROWS_AS(ConvolutionalInstance::with_tables(spreading_ones(), 3, 2, 1, 2, 2,
                                                     std::move(bad_t)),
                  std::invalid_argument);
  // Wrong table count.
  auto missing = tables;
  missing.cover.pop_back();
  CHECK_THROWS_AS(ConvolutionalInstance::with_tables(spreading_ones(), 2, 3, 1, 2, 1,
                                                     std::move(missing)),
                  std::invalid_argument);
}
