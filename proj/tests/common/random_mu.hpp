#pragma once

#include <random>
#include <vector>

#include "canonconn/frames.hpp"
#include "random_cochain.hpp"

namespace testing_util {

inline canonconn::Poly random_poly(std::mt19937& rng, std::size_t nvars, unsigned max_deg, int terms) {
  canonconn::Poly p(nvars);
  std::uniform_int_distribution<std::size_t> var(0, nvars - 1);
  std::uniform_int_distribution<unsigned> deg(0, max_deg);
  for (int t = 0; t < terms; ++t) {
    canonconn::Exponent e(nvars, 0);
    for (unsigned d = deg(rng); d > 0; --d) ++e[var(rng)];
    p.add_term(e, random_rat(rng));
  }
  return p;
}

/// Random quadratic connection coefficients on the horizontal frame.
inline std::vector<std::vector<canonconn::Poly>> random_mu(std::mt19937& rng, const canonconn::ExtendedAlgebra& alg,
                                                           const canonconn::FrameModel& m) {
  std::vector<std::vector<canonconn::Poly>> mu(m.fields.size());
  for (auto& row : mu)
    for (std::size_t s = 0; s < alg.dim_g0(); ++s) row.push_back(random_poly(rng, m.dim, 2, 3));
  return mu;
}

}  // namespace testing_util
