#include "scpseudo/krawtchouk.hpp"

#include <stdexcept>

namespace scpseudo {

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long long krawtchouk(int w, int j, int m) {
  if (w < 0 || w > m || j < 0 || j > m)
    throw std::invalid_argument("krawtchouk: arguments out of range");
  long long sum = 0;
  for (int t = 0; t <= j; ++t) {
    long long term = binomial(j, t) * binomial(m - j, w - t);
    sum += (t & 1) ? -term : term;
  }
  return sum;
}

} // namespace scpseudo
