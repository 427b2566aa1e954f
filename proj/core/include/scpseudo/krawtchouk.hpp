#pragma once

namespace scpseudo {

// C(n, k) as a 64-bit integer; 0 when k is out of range.
long long binomial(int n, int k);

// K_w(j; m) = sum_t (-1)^t C(j, t) C(m-j, w-t): the sum of (-1)^{x.s} over
// weight-w binary vectors x of length m, for any fixed s of weight j.
long long krawtchouk(int w, int j, int m);

} // namespace scpseudo
