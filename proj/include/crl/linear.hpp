#pragma once

#include <vector>

#include "crl/rational.hpp"

namespace crl {

/// Dense row-major square matrix of rationals.
struct RationalMatrix {
  std::size_t n = 0;
  std::vector<Rational> data;

  explicit RationalMatrix(std::size_t size) : n(size), data(size * size, Rational(0)) {}
  Rational& operator()(std::size_t r, std::size_t c) { return data[r * n + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data[r * n + c]; }
};

/// Exact solution of A x = b by Gauss-Jordan elimination. Throws Error if A is singular.
std::vector<Rational> solve_linear(RationalMatrix a, std::vector<Rational> b);

}  // namespace crl
