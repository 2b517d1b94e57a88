#pragma once

#include <optional>
#include <random>

#include "canonconn/cochain.hpp"

namespace testing_util {

inline canonconn::Complex make_complex(const canonconn::CarnotSpec& s) {
  using namespace canonconn;
  return Complex(ExtendedAlgebra::extend(CarnotAlgebra::build(s)));
}

inline canonconn::Rat random_rat(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
  int n = num(rng);
  int d = den(rng);
  return canonconn::frac(n, d);
}

/// Random element of the homogeneity-h slice of C^k (all slices when h is absent).
inline canonconn::Cochain random_cochain(std::mt19937& rng, const canonconn::Complex& cx, std::size_t k,
                                         std::optional<int> h = std::nullopt) {
  canonconn::Cochain c = canonconn::zero_cochain(cx, k);
  for (std::size_t i = 0; i < c.coeffs.size(); ++i)
    if (!h || cx.homogeneity(k, i) == *h) c.coeffs[i] = random_rat(rng);
  return c;
}

}  // namespace testing_util
