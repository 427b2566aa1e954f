#include "scpseudo/rng.hpp"

#include <numeric>
#include <stdexcept>
#include <utility>

namespace scpseudo {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
  // Accept x >= 2^64 mod n so that x % n is exactly uniform.
  std::uint64_t threshold = (0 - n) % n;
  std::uint64_t x;
  do {
    x = gen_();
  } while (x < threshold);
  return x % n;
}

double Rng::unit() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

std::vector<std::uint32_t> Rng::permutation(std::uint32_t n) {
  std::vector<std::uint32_t> p(n);
  std::iota(p.begin(), p.end(), 0u);
  for (std::uint32_t i = n; i > 1; --i) {
    std::uint32_t j = static_cast<std::uint32_t>(below(i));
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

} // namespace scpseudo
