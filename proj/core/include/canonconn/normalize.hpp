#pragma once

// Degree-one normalization: given the homogeneity-1 curvature of a reference
// connection, find the unique alpha_1 in C^1_1 such that kappa_1 = d alpha_1 +
// kappa~_1 satisfies db^-1 kappa_1 = 0 and d^*(1 - db^-1 db) kappa_1 = 0.

#include <cstddef>
#include <string>
#include <vector>

#include "canonconn/cochain.hpp"

namespace canonconn {

struct NormalizationSolution {
  Cochain alpha_1;
  Cochain kappa_1;
  std::size_t system_rank = 0;
  std::size_t unknowns = 0;
  std::size_t kernel_dim = 0;
  Vec residual;  // stacked system residual, zero on success
};

struct CertificateCheck {
  std::string name;
  bool pass = false;
  Vec residual;
};

struct Certificate {
  std::vector<CertificateCheck> checks;
  bool all_pass() const;
  const CertificateCheck& at(const std::string& name) const;
};

class Normalizer {
 public:
  explicit Normalizer(const Complex& cx);

  const Complex& complex() const noexcept { return *cx_; }
  /// Flat indices of the homogeneity-1 slices of C^1 and C^2.
  const std::vector<std::size_t>& unknowns() const noexcept { return c1_; }
  const std::vector<std::size_t>& inputs() const noexcept { return c2_; }

  /// Dense stacked system M alpha = -R kappa~ on the slices.
  const Mat& system() const noexcept { return m_; }
  const Mat& rhs_map() const noexcept { return r_; }
  /// alpha_1 = S kappa~_1 in slice coordinates, valid for realizable inputs.
  const Mat& solution_operator() const noexcept { return s_; }
  /// Basis (columns, slice coordinates) of the realizable inputs.
  Mat valid_inputs() const;

  bool check_bianchi_deg1(const Cochain& kappa_tilde) const;
  /// Throws Inconsistent (with the residual) or NonUniqueSolution.
  NormalizationSolution solve_alpha1(const Cochain& kappa_tilde) const;

 private:
  const Complex* cx_;
  std::vector<std::size_t> c1_, c2_;
  SpMat q_;  // 1 - db^-1 db on C^2
  Mat m_, r_, s_;
  std::size_t rank_ = 0;
};

/// d^*(i_A kappa_1) == d^*(i_A db^-1 db kappa_1) for every basis A of g_-.
bool corollary_form_check(const Complex& cx, const Cochain& kappa_1);

/// Extension condition, normalization condition, positive homogeneity and
/// orthogonality of Pi kappa_1 to Pi d C^1_1, each with its exact residual.
Certificate certify(const Complex& cx, const Cochain& kappa);

}  // namespace canonconn
