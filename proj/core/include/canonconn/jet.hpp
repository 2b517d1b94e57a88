#pragma once

// Truncated Taylor expansions at a fixed point p. A jet stores the coefficients
// of h^e for |e| <= N (x = p + h) together with the order up to which those
// coefficients are still exact; differentiation lowers that order by one.

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <memory>
#include <span>
#include <vector>

#include "canonconn/exactla.hpp"
#include "canonconn/poly.hpp"

namespace canonconn {

class MonomialBasis {
 public:
  /// Shared instance for (nvars, max_degree).
  static std::shared_ptr<const MonomialBasis> get(std::size_t nvars, unsigned max_degree);

  std::size_t nvars() const noexcept { return nvars_; }
  unsigned max_degree() const noexcept { return max_degree_; }
  std::size_t size() const noexcept { return exps_.size(); }
  const Exponent& exponent(std::size_t i) const { return exps_[i]; }
  unsigned degree(std::size_t i) const { return deg_[i]; }
  /// Index of e_i * e_j, or -1 past the maximum degree.
  int product(std::size_t i, std::size_t j) const;
  /// Index of e_i with one power of variable v removed, or -1.
  int lower(std::size_t i, std::size_t v) const { return low_[i * nvars_ + v]; }
  std::size_t index_of(const Exponent& e) const;
  /// Number of monomials of degree <= d (the basis is graded, so these come first).
  std::size_t prefix(int d) const;

  MonomialBasis(std::size_t nvars, unsigned max_degree);

 private:
  std::size_t nvars_;
  unsigned max_degree_;
  std::vector<Exponent> exps_;  // graded, degree 0 first
  std::vector<unsigned> deg_;
  std::vector<std::uint64_t> code_;  // exponents packed 5 bits per variable
  std::unordered_map<std::uint64_t, int> lookup_;
  std::vector<int> low_;
  std::vector<std::size_t> prefix_;
};

class Jet {
 public:
  Jet() = default;
  Jet(std::shared_ptr<const MonomialBasis> basis, int order);
  static Jet constant(std::shared_ptr<const MonomialBasis> basis, const Rat& c);
  /// Taylor expansion of a polynomial at `point`.
  static Jet from_poly(std::shared_ptr<const MonomialBasis> basis, const Poly& f, std::span<const Rat> point);

  const std::shared_ptr<const MonomialBasis>& basis() const noexcept { return basis_; }
  /// Coefficients of degree <= order are exact; order < 0 means nothing is known.
  int order() const noexcept { return order_; }
  /// Nonzero coefficients, sorted by monomial index.
  const std::vector<std::pair<std::uint32_t, Rat>>& terms() const noexcept { return t_; }
  Rat coeff(std::size_t i) const;
  void set_coeff(std::size_t i, const Rat& c);
  bool is_zero() const noexcept { return t_.empty(); }

  /// f(p); throws if the order is negative.
  const Rat& value() const;
  Jet derivative(std::size_t v) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(const Jet& a);
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator*(const Rat& s, const Jet& a);

 private:
  void truncate();

  std::shared_ptr<const MonomialBasis> basis_;
  int order_ = -1;
  std::vector<std::pair<std::uint32_t, Rat>> t_;
};

/// Vector field with jet components.
using JetVec = std::vector<Jet>;

JetVec to_jets(std::shared_ptr<const MonomialBasis> basis, const PolyVec& v, std::span<const Rat> point);
/// X(f) = sum_i X^i df/dx_i
Jet apply(const JetVec& x, const Jet& f);
JetVec bracket(const JetVec& x, const JetVec& y);
Vec values(const JetVec& v);
int min_order(const JetVec& v);

/// Square matrix of jets, row-major.
struct JetMat {
  std::size_t n = 0;
  std::vector<Jet> e;
  Jet& operator()(std::size_t r, std::size_t c) { return e[r * n + c]; }
  const Jet& operator()(std::size_t r, std::size_t c) const { return e[r * n + c]; }
};

/// Inverse via the Neumann series around the value at p; throws Singular.
JetMat inverse(const JetMat& m);
JetVec operator*(const JetMat& m, const JetVec& v);

}  // namespace canonconn
