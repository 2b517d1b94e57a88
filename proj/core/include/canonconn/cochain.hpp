#pragma once

// The complex C^k = g (x) wedge^k g_-^* with the Spencer differential (adjoint
// representation), the base differential (trivial representation), their
// adjoints and pseudo-inverses, and the projections Pi, P, P^infinity.
//
// Basis of C^k: e_a (x) w_I with a a basis index of g and I a strictly
// increasing multi-index into the g_- basis; flat index a * C(n, k) + idx(I).
// w_I is the dual wedge b_{i1}^* ^ ... ^ b_{ik}^*, with w_I(b_J) = delta_IJ.

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "canonconn/carnot.hpp"
#include "canonconn/exactla.hpp"

namespace canonconn {

/// Scalar forms wedge^k g_-^*.
struct FormSpace {
  std::size_t k = 0;
  std::vector<std::uint32_t> masks;               // bit i set iff b_i in I
  std::vector<std::vector<std::size_t>> indices;  // sorted multi-indices
  std::vector<int> homogeneity;                   // sum of layers
  std::unordered_map<std::uint32_t, std::size_t> lookup;
  Mat gram;                                       // det of the dual gram minors

  std::size_t size() const noexcept { return masks.size(); }
  std::size_t index_of(std::uint32_t mask) const { return lookup.at(mask); }
};

struct Cochain {
  std::size_t k = 0;
  Vec coeffs;
};

class Complex {
 public:
  explicit Complex(ExtendedAlgebra alg);

  const ExtendedAlgebra& algebra() const noexcept { return alg_; }
  std::size_t n() const noexcept { return n_; }         // dim g_-
  std::size_t big_n() const noexcept { return big_n_; } // dim g
  std::size_t max_k() const noexcept { return n_; }

  const FormSpace& forms(std::size_t k) const { return forms_.at(k); }
  std::size_t dim(std::size_t k) const { return k <= n_ ? big_n_ * forms_[k].size() : 0; }
  std::size_t index(std::size_t k, std::size_t a, std::size_t form) const { return a * forms_[k].size() + form; }
  int homogeneity(std::size_t k, std::size_t idx) const;
  /// Sorted distinct homogeneities occurring in C^k.
  std::vector<int> homogeneities(std::size_t k) const;
  /// Flat indices of C^k with the given homogeneity, in increasing order.
  std::vector<std::size_t> slice(std::size_t k, int h) const;
  /// Form part homogeneity of a basis element.
  int form_homogeneity(std::size_t k, std::size_t idx) const;

  /// Depth S: homogeneity of the top form; S_k: largest form homogeneity in degree k.
  int depth() const noexcept { return s_depth_; }
  int s_k(std::size_t k) const { return s_k_.at(k); }

  // Operators. Each maps between whole degrees; out-of-range degrees give
  // empty (0-dimensional) shapes.
  const SpMat& d(std::size_t k) const { return d_.at(k); }            // C^k -> C^{k+1}
  const SpMat& db(std::size_t k) const { return db_.at(k); }          // C^k -> C^{k+1}
  const SpMat& d_adj(std::size_t k) const { return d_adj_.at(k); }    // C^{k+1} -> C^k
  const SpMat& db_adj(std::size_t k) const { return db_adj_.at(k); }  // C^{k+1} -> C^k
  const SpMat& db_inv(std::size_t k) const { return db_inv_.at(k); }  // C^{k+1} -> C^k
  const SpMat& pi(std::size_t k) const { return pi_.at(k); }          // on C^k
  const SpMat& p(std::size_t k) const { return p_.at(k); }            // on C^k
  const SpMat& gram(std::size_t k) const { return gram_.at(k); }
  /// base differential inverse into C^{k-1} (empty for k = 0)
  SpMat db_inv_into(std::size_t k) const;

  /// P^m on C^k by repeated squaring-free multiplication.
  SpMat p_power(std::size_t k, std::size_t m) const;
  /// P^(S_k - k) on C^k.
  SpMat p_infty(std::size_t k) const;

  // Form-level pieces, exposed for tests.
  const SpMat& form_d(std::size_t k) const { return fd_.at(k); }
  const SpMat& form_d_inv(std::size_t k) const { return fd_inv_.at(k); }

  Rat inner(const Cochain& x, const Cochain& y) const;

 private:
  ExtendedAlgebra alg_;
  std::size_t n_ = 0, big_n_ = 0;
  std::vector<FormSpace> forms_;
  std::vector<int> value_degree_;
  int s_depth_ = 0;
  std::vector<int> s_k_;
  std::vector<SpMat> fd_, fd_inv_, fd_adj_;
  std::vector<SpMat> d_, db_, d_adj_, db_adj_, db_inv_, pi_, p_, gram_;
};

// ---------------------------------------------------------------------------
// Cochain algebra

Cochain zero_cochain(const Complex& cx, std::size_t k);
/// e_a (x) w_I with I given as a list of g_- indices in any order (sign applied).
Cochain basis_cochain(const Complex& cx, std::size_t a, std::vector<std::size_t> form);
/// Scalar form as a vector over forms(k).
Vec scalar_form(const Complex& cx, std::vector<std::size_t> form);

Cochain wedge(const Complex& cx, const Cochain& alpha, std::size_t j, std::span<const Rat> beta);
Cochain bracket(const Complex& cx, const Cochain& alpha, const Cochain& beta);
/// alpha(b_{i1}, ..., b_{ik}) as a vector in g.
Vec evaluate(const Complex& cx, const Cochain& alpha, std::span<const std::size_t> args);
/// The identity of g_- as an element of C^1.
Cochain identity_cochain(const Complex& cx);

/// Contraction with the basis vector b_m of g_-: C^k -> C^{k-1}.
SpMat interior(const Complex& cx, std::size_t k, std::size_t m);
/// Homogeneity-h part of a cochain.
Cochain homogeneous_part(const Complex& cx, const Cochain& x, int h);

Cochain apply(const SpMat& op, std::size_t k_out, const Cochain& x);
Cochain operator+(const Cochain& x, const Cochain& y);
Cochain operator-(const Cochain& x, const Cochain& y);

/// beta = P^infinity alpha, with the characterizing equations verified.
Cochain p_infty_characterize(const Complex& cx, const Cochain& alpha);
/// Dimension of the kernel of alpha -> (Pi alpha, db^-1 d alpha, db^-1 alpha) on C^k.
std::size_t characterization_kernel_dim(const Complex& cx, std::size_t k);

/// ker d on the homogeneity-1 part of C^1 is zero.
bool tanaka_rigidity(const Complex& cx);

struct IdentityCheck {
  std::string name;
  bool holds = false;
};
/// The structural identities of the complex on C^k, each evaluated as an exact matrix identity.
std::vector<IdentityCheck> check_identities(const Complex& cx, std::size_t k);

/// P^inf Pi = P^inf and Pi P^inf = Pi on C^k. These hold on C^0 and C^1 but
/// not in general above (see the heisenberg C^2 unit test).
std::vector<IdentityCheck> p_infty_pi_relations(const Complex& cx, std::size_t k);

/// Subspace dimensions of one homogeneity slice of C^k.
struct SliceDims {
  int homogeneity = 0;
  std::size_t total = 0, t = 0, d_t = 0, p = 0, e0 = 0;
};
std::vector<SliceDims> slice_dimensions(const Complex& cx, std::size_t k);

}  // namespace canonconn
