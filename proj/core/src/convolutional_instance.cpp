#include "scpseudo/convolutional_instance.hpp"

#include <stdexcept>

#include "scpseudo/errors.hpp"
#include "scpseudo/rng.hpp"

namespace scpseudo {

BitVec wrap_codeword(const BitVec& c, std::size_t lambda, std::size_t N,
                     std::size_t b_v, std::size_t m) {
  std::size_t ring = lambda * N * b_v;
  if (ring == 0 || m == 0 || c.size() % (ring * m) != 0)
    throw std::invalid_argument("wrap_codeword: length is not a multiple of lambda*N*b_v*m");
  std::size_t J = c.size() / (ring * m);
  BitVec out(ring * m);
  for (std::size_t i = 0; i < ring; ++i)
    for (std::size_t k = 0; k < m; ++k) {
      bool bit = false;
      for (std::size_t j = 0; j < J; ++j) bit ^= c.get((i + j * ring) * m + k);
      if (bit) out.set(i * m + k, true);
    }
  return out;
}

namespace {

struct SlotCounter {
  const EdgeSpreading& s;
  std::size_t T;

  // Flat slot index for (component, row, column, copy, t mod T).
  std::size_t lift_slot(std::size_t i, std::size_t x, std::size_t y, std::size_t u,
                        std::size_t t_mod) const {
    std::size_t idx = 0;
    for (std::size_t ci = 0; ci < i; ++ci) idx += s.components[ci].edge_count();
    const BaseMatrix& Bi = s.components[i];
    for (std::size_t cx = 0; cx < x; ++cx)
      for (std::size_t cy = 0; cy < Bi.vars(); ++cy)
        idx += static_cast<std::size_t>(Bi.at(cx, cy));
    for (std::size_t cy = 0; cy < y; ++cy) idx += static_cast<std::size_t>(Bi.at(x, cy));
    idx += u;
    return idx * T + t_mod;
  }

  std::size_t lift_slots() const { return s.sum().edge_count() * T; }
};

} // namespace

ConvolutionalInstance ConvolutionalInstance::random(const EdgeSpreading& spreading,
                                                    std::size_t lambda, std::size_t J,
                                                    std::size_t N, std::size_t m,
                                                    std::size_t T, std::uint64_t seed) {
  Tables tables;
  std::size_t slots = spreading.sum().edge_count() * T;
  Rng rng(seed);
  tables.lift.reserve(slots);
  for (std::size_t i = 0; i < slots; ++i)
    tables.lift.push_back(rng.permutation(static_cast<std::uint32_t>(N)));
  tables.cover.reserve(slots * N);
  for (std::size_t i = 0; i < slots * N; ++i)
    tables.cover.push_back(rng.permutation(static_cast<std::uint32_t>(m)));
  return with_tables(spreading, lambda, J, N, m, T, std::move(tables));
}

ConvolutionalInstance ConvolutionalInstance::with_tables(const EdgeSpreading& spreading,
                                                         std::size_t lambda, std::size_t J,
                                                         std::size_t N, std::size_t m,
                                                         std::size_t T, Tables tables) {
  if (lambda < 1 || lambda < spreading.memory())
    throw std::invalid_argument("ConvolutionalInstance: lambda must be >= max(1, ms)");
  if (J < 1) throw std::invalid_argument("ConvolutionalInstance: J must be >= 1");
  if (N < 1 || m < 1) throw std::invalid_argument("ConvolutionalInstance: N, m must be >= 1");
  if (T < 1 || lambda % T != 0)
    throw std::invalid_argument("ConvolutionalInstance: T must divide lambda");
  ConvolutionalInstance inst;
  inst.spreading_ = spreading;
  inst.lambda_ = lambda;
  inst.J_ = J;
  inst.N_ = N;
  inst.m_ = m;
  inst.T_ = T;
  inst.tables_ = std::move(tables);
  std::size_t slots = spreading.sum().edge_count() * T;
  if (inst.tables_.lift.size() != slots || inst.tables_.cover.size() != slots * N)
    throw std::invalid_argument("ConvolutionalInstance: table sizes do not match geometry");
  for (const auto& p : inst.tables_.lift)
    if (p.size() != N) throw std::invalid_argument("ConvolutionalInstance: bad lift permutation size");
  for (const auto& p : inst.tables_.cover)
    if (p.size() != m) throw std::invalid_argument("ConvolutionalInstance: bad cover permutation size");
  inst.build();
  return inst;
}

void ConvolutionalInstance::build() {
  std::size_t b_c = spreading_.checks(), b_v = spreading_.vars();
  std::size_t ms = spreading_.memory();
  std::size_t L = J_ * lambda_;
  SlotCounter slots{spreading_, T_};

  window_graph_ = TannerGraph((L + ms) * b_c * N_, L * b_v * N_);
  window_cover_ = TannerGraph((L + ms) * b_c * N_ * m_, L * b_v * N_ * m_);
  tailbiting_graph_ = TannerGraph(lambda_ * b_c * N_, lambda_ * b_v * N_);
  tailbiting_cover_ = TannerGraph(lambda_ * b_c * N_ * m_, lambda_ * b_v * N_ * m_);

  // Every (time, component, entry, copy) event adds N lifted edges; the same
  // permutations serve the window at time t and the ring at time t mod lambda.
  for (std::size_t t = 0; t < L; ++t) {
    std::size_t t_mod = t % T_;
    for (std::size_t i = 0; i <= ms; ++i) {
      const BaseMatrix& Bi = spreading_.components[i];
      for (std::size_t x = 0; x < b_c; ++x)
        for (std::size_t y = 0; y < b_v; ++y)
          for (std::size_t u = 0; u < static_cast<std::size_t>(Bi.at(x, y)); ++u) {
            std::size_t base = slots.lift_slot(i, x, y, u, t_mod);
            const auto& Q = tables_.lift[base];
            for (std::size_t n = 0; n < N_; ++n) {
              const auto& sigma = tables_.cover[base * N_ + n];
              std::size_t var = (t * b_v + y) * N_ + n;
              std::size_t check = ((t + i) * b_c + x) * N_ + Q[n];
              window_graph_.add_edge(static_cast<std::uint32_t>(check),
                                     static_cast<std::uint32_t>(var));
              for (std::size_t k = 0; k < m_; ++k)
                window_cover_.add_edge(static_cast<std::uint32_t>(check * m_ + sigma[k]),
                                       static_cast<std::uint32_t>(var * m_ + k));
              if (t < lambda_) {
                std::size_t rvar = (t * b_v + y) * N_ + n;
                std::size_t rcheck = (((t + i) % lambda_) * b_c + x) * N_ + Q[n];
                tailbiting_graph_.add_edge(static_cast<std::uint32_t>(rcheck),
                                           static_cast<std::uint32_t>(rvar));
                for (std::size_t k = 0; k < m_; ++k)
                  tailbiting_cover_.add_edge(static_cast<std::uint32_t>(rcheck * m_ + sigma[k]),
                                             static_cast<std::uint32_t>(rvar * m_ + k));
              }
            }
          }
    }
  }
}

bool ConvolutionalInstance::is_window_cover_codeword(const BitVec& c) const {
  return window_cover_.parity_matrix().in_nullspace(c);
}

bool ConvolutionalInstance::is_tailbiting_cover_codeword(const BitVec& c) const {
  return tailbiting_cover_.parity_matrix().in_nullspace(c);
}

BitVec ConvolutionalInstance::wrap(const BitVec& c) const {
  BitVec out = wrap_codeword(c, lambda_, N_, spreading_.vars(), m_);
  if (!is_tailbiting_cover_codeword(out))
    throw property_error("wrapped word fails the tail-biting cover parity checks");
  return out;
}

Pseudocodeword ConvolutionalInstance::wrap_pseudocodeword(const BitVec& c) const {
  return project_pseudocodeword(wrap(c), m_);
}

std::vector<BitVec> ConvolutionalInstance::restricted_window_basis() const {
  BitMatrix H = window_cover_.parity_matrix();
  std::size_t keep = (J_ - 1) * period_vars() * m_;
  BitMatrix Hr(H.rows(), keep);
  for (std::size_t r = 0; r < H.rows(); ++r)
    for (std::size_t c = 0; c < keep; ++c)
      if (H.get(r, c)) Hr.set(r, c, true);
  std::vector<BitVec> short_basis = nullspace_basis(Hr);
  std::vector<BitVec> out;
  out.reserve(short_basis.size());
  for (const BitVec& v : short_basis) {
    BitVec full(H.cols());
    for (std::size_t c = 0; c < keep; ++c)
      if (v.get(c)) full.set(c, true);
    out.push_back(std::move(full));
  }
  return out;
}

} // namespace scpseudo
