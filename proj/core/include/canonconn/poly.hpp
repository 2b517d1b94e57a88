#pragma once

// Sparse multivariate polynomials with rational coefficients, and polynomial
// vector fields on R^n.
//
// Text form: a sum of terms `c * x1^a1 * x2^a2 ...`, e.g. "1/2*x1^2*x3 - x2 + 3".
// The coefficient, `*`, and exponents of 1 may be omitted; whitespace is ignored.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "canonconn/exactla.hpp"

namespace canonconn {

using Exponent = std::vector<unsigned>;

class Poly {
 public:
  Poly() = default;
  explicit Poly(std::size_t nvars) : nvars_(nvars) {}
  static Poly constant(std::size_t nvars, const Rat& c);
  /// The coordinate function x_i (0-based).
  static Poly variable(std::size_t nvars, std::size_t i);

  std::size_t nvars() const noexcept { return nvars_; }
  const std::map<Exponent, Rat>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  unsigned degree() const;

  void add_term(const Exponent& e, const Rat& c);

  Poly derivative(std::size_t i) const;
  Rat evaluate(std::span<const Rat> x) const;

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(const Rat& s, const Poly& a);
  friend bool operator==(const Poly& a, const Poly& b) { return a.nvars_ == b.nvars_ && a.terms_ == b.terms_; }

 private:
  std::size_t nvars_ = 0;
  std::map<Exponent, Rat> terms_;  // no zero coefficients
};

Poly parse_poly(std::string_view text, std::size_t nvars);
/// Canonical text: terms by descending total degree, then lexicographic exponent.
std::string to_string(const Poly& p);

/// A vector field sum_i v[i] d/dx_i.
using PolyVec = std::vector<Poly>;

PolyVec bracket(const PolyVec& x, const PolyVec& y);
/// X(f) = sum_i X^i df/dx_i
Poly apply(const PolyVec& x, const Poly& f);
Vec evaluate(const PolyVec& v, std::span<const Rat> point);
PolyVec operator+(const PolyVec& a, const PolyVec& b);
PolyVec operator-(const PolyVec& a, const PolyVec& b);
PolyVec operator*(const Rat& s, const PolyVec& a);
PolyVec operator*(const Poly& f, const PolyVec& a);

}  // namespace canonconn
