#include "crl/linear.hpp"

#include "crl/errors.hpp"

namespace crl {

std::vector<Rational> solve_linear(RationalMatrix a, std::vector<Rational> b) {
  const std::size_t n = a.n;
  if (b.size() != n) throw Error("linear system dimensions disagree");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a(pivot, col) == 0) ++pivot;
    if (pivot == n) throw Error("singular linear system");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
      std::swap(b[pivot], b[col]);
    }
    Rational inv = 1 / a(col, col);
    for (std::size_t c = col; c < n; ++c) a(col, c) *= inv;
    b[col] *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a(r, col) == 0) continue;
      Rational f = a(r, col);
      for (std::size_t c = col; c < n; ++c) {
        if (a(col, c) != 0) a(r, c) -= f * a(col, c);
      }
      b[r] -= f * b[col];
    }
  }
  return b;
}

}  // namespace crl
