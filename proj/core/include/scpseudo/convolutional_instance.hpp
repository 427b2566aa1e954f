#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "scpseudo/base_matrix.hpp"
#include "scpseudo/gf2.hpp"
#include "scpseudo/pseudocodeword.hpp"
#include "scpseudo/tanner_graph.hpp"

namespace scpseudo {

// Wraps a codeword of a degree-m cover of a J*lambda-instant window onto the
// lambda-instant circle: out_{i,k} = sum_j c_{i + j*lambda*N*b_v, k} mod 2.
// Pure vector arithmetic; membership in the tail-biting cover is the caller's
// concern (ConvolutionalInstance::wrap checks it).
BitVec wrap_codeword(const BitVec& c, std::size_t lambda, std::size_t N,
                     std::size_t b_v, std::size_t m);

// A truncated window of an unterminated convolutional protograph together
// with a matched tail-biting ring, lifted by N and covered by degree m with
// permutations that repeat with period T (T divides lambda). Because the
// permutation assigned to an edge depends only on its component, protograph
// position, copy index and time mod T, wrapped window-cover codewords land in
// the tail-biting cover.
class ConvolutionalInstance {
public:
  // Periodic permutation tables. Slots are ordered by (component i, row x,
  // column y, multiplicity copy u, time t mod T) for the lift and by the same
  // tuple extended with the lift copy n for the cover.
  struct Tables {
    std::vector<std::vector<std::uint32_t>> lift;  // each an N-permutation
    std::vector<std::vector<std::uint32_t>> cover; // each an m-permutation
  };

  static ConvolutionalInstance random(const EdgeSpreading& spreading, std::size_t lambda,
                                      std::size_t J, std::size_t N, std::size_t m,
                                      std::size_t T, std::uint64_t seed);
  static ConvolutionalInstance with_tables(const EdgeSpreading& spreading, std::size_t lambda,
                                           std::size_t J, std::size_t N, std::size_t m,
                                           std::size_t T, Tables tables);

  std::size_t lambda() const { return lambda_; }
  std::size_t window_instants() const { return J_ * lambda_; }
  std::size_t J() const { return J_; }
  std::size_t N() const { return N_; }
  std::size_t m() const { return m_; }
  std::size_t period() const { return T_; }
  const EdgeSpreading& spreading() const { return spreading_; }

  // Variables per wrapped period, lambda*N*b_v.
  std::size_t period_vars() const { return lambda_ * N_ * spreading_.vars(); }

  const TannerGraph& window_graph() const { return window_graph_; }
  const TannerGraph& window_cover() const { return window_cover_; }
  const TannerGraph& tailbiting_graph() const { return tailbiting_graph_; }
  const TannerGraph& tailbiting_cover() const { return tailbiting_cover_; }

  bool is_window_cover_codeword(const BitVec& c) const;
  bool is_tailbiting_cover_codeword(const BitVec& c) const;

  // Wraps a window-cover codeword and verifies the result against the
  // tail-biting cover's parity checks (throws property_error on failure).
  BitVec wrap(const BitVec& c) const;
  Pseudocodeword wrap_pseudocodeword(const BitVec& c) const;

  // Basis of the window-cover codewords whose support lies in the first
  // (J-1)*lambda*N*b_v variables, so wrapped sums never reach past the
  // truncation. Vectors have full window-cover length.
  std::vector<BitVec> restricted_window_basis() const;

private:
  ConvolutionalInstance() = default;
  void build();

  EdgeSpreading spreading_;
  std::size_t lambda_ = 0, J_ = 0, N_ = 0, m_ = 0, T_ = 0;
  Tables tables_;
  TannerGraph window_graph_, window_cover_;
  TannerGraph tailbiting_graph_, tailbiting_cover_;
};

} // namespace scpseudo
