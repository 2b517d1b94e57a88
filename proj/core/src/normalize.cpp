#include "canonconn/normalize.hpp"

#include <algorithm>

namespace canonconn {

bool Certificate::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CertificateCheck& c) { return c.pass; });
}

const CertificateCheck& Certificate::at(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw Error(ErrorKind::InvalidInput, "no certificate check named " + name);
}

namespace {

Vec gather(const Vec& v, const std::vector<std::size_t>& idx) {
  Vec out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(v[i]);
  return out;
}

SpMat q_operator(const Complex& cx) {
  SpMat id = SpMat::identity(cx.dim(2));
  if (cx.max_k() < 3) return id;
  return id - cx.db_inv(2) * cx.db(2);
}

}  // namespace

Normalizer::Normalizer(const Complex& cx) : cx_(&cx), c1_(cx.slice(1, 1)), c2_(cx.slice(2, 1)), q_(q_operator(cx)) {
  // rows: d^* Q (. ) and db^-1 (.), both landing in the slice of C^1
  SpMat top = cx.d_adj(1) * q_;
  const SpMat& bottom = cx.db_inv(1);
  Mat d = cx.d(1).dense_block(c2_, c1_);
  Mat rt = top.dense_block(c1_, c2_);
  Mat rb = bottom.dense_block(c1_, c2_);
  r_ = Mat::vstack({&rt, &rb});
  m_ = r_ * d;
  rank_ = rank(m_);
  if (rank_ == c1_.size() && !c1_.empty()) {
    Mat mt = m_.transpose();
    Mat left = inverse(mt * m_) * mt;
    s_ = Rat(-1) * (left * r_);
  } else {
    s_ = Mat(c1_.size(), c2_.size());
  }
}

Mat Normalizer::valid_inputs() const {
  // Bianchi and consistency of the stacked system: d kappa = 0, (1 - M S') R kappa = 0
  auto c3 = cx_->max_k() >= 3 ? cx_->slice(3, 1) : std::vector<std::size_t>{};
  Mat bianchi = cx_->max_k() >= 3 ? cx_->d(2).dense_block(c3, c2_) : Mat(0, c2_.size());
  Mat consistency = r_ + m_ * s_;
  Mat sys = Mat::vstack({&bianchi, &consistency});
  return decompose(sys).kernel_basis;
}

bool Normalizer::check_bianchi_deg1(const Cochain& kappa_tilde) const {
  if (cx_->max_k() < 3) return true;
  return is_zero(cx_->d(2) * kappa_tilde.coeffs);
}

NormalizationSolution Normalizer::solve_alpha1(const Cochain& kappa_tilde) const {
  if (kappa_tilde.k != 2 || kappa_tilde.coeffs.size() != cx_->dim(2))
    throw Error(ErrorKind::ShapeMismatch, "kappa~ must be an element of C^2");
  for (std::size_t i = 0; i < kappa_tilde.coeffs.size(); ++i)
    if (sgn(kappa_tilde.coeffs[i]) != 0 && cx_->homogeneity(2, i) != 1)
      throw Error(ErrorKind::InvalidInput, "kappa~_1 has a component outside homogeneity 1");

  NormalizationSolution sol;
  sol.unknowns = c1_.size();
  sol.system_rank = rank_;
  sol.kernel_dim = c1_.size() - rank_;
  if (sol.kernel_dim != 0)
    throw Error(ErrorKind::NonUniqueSolution,
                "degree-1 system has a " + std::to_string(sol.kernel_dim) + "-dimensional kernel");

  if (!check_bianchi_deg1(kappa_tilde)) {
    sol.residual = cx_->d(2) * kappa_tilde.coeffs;
    std::string msg = "d kappa~_1 != 0:";
    for (const auto& r : sol.residual)
      if (sgn(r) != 0) msg += " " + to_string(r);
    throw Error(ErrorKind::Inconsistent, msg);
  }

  Vec k2 = gather(kappa_tilde.coeffs, c2_);
  Vec rhs = Rat(-1) * (r_ * k2);
  auto x = solve(m_, rhs);
  if (!x) {
    Vec a = s_ * k2;
    sol.residual = m_ * a - rhs;
    std::string msg = "degree-1 system inconsistent, residual:";
    for (const auto& r : sol.residual) msg += " " + to_string(r);
    throw Error(ErrorKind::Inconsistent, msg);
  }
  sol.residual = Vec(rhs.size());
  sol.alpha_1 = zero_cochain(*cx_, 1);
  for (std::size_t i = 0; i < c1_.size(); ++i) sol.alpha_1.coeffs[c1_[i]] = (*x)[i];
  sol.kappa_1 = {2, cx_->d(1) * sol.alpha_1.coeffs + kappa_tilde.coeffs};
  return sol;
}

bool corollary_form_check(const Complex& cx, const Cochain& kappa_1) {
  SpMat q = q_operator(cx);
  Vec qk = q * kappa_1.coeffs;
  for (std::size_t m = 0; m < cx.n(); ++m) {
    SpMat iota = interior(cx, 2, m);
    // d^*(i_A kappa_1) - d^*(i_A db^-1 db kappa_1) = d^*(i_A Q kappa_1)
    if (!is_zero(cx.d_adj(0) * (iota * qk))) return false;
  }
  return true;
}

Certificate certify(const Complex& cx, const Cochain& kappa) {
  Certificate cert;
  Cochain k1 = homogeneous_part(cx, kappa, 1);

  Vec ext = cx.db_inv(1) * kappa.coeffs;
  cert.checks.push_back({"extension", is_zero(ext), ext});

  Vec norm = cx.d_adj(1) * (q_operator(cx) * k1.coeffs);
  cert.checks.push_back({"normalization", is_zero(norm), norm});

  Vec low(kappa.coeffs.size());
  bool positive = true;
  for (std::size_t i = 0; i < kappa.coeffs.size(); ++i)
    if (cx.homogeneity(2, i) <= 0 && sgn(kappa.coeffs[i]) != 0) {
      low[i] = kappa.coeffs[i];
      positive = false;
    }
  cert.checks.push_back({"positive_homogeneity", positive, low});

  // <Pi kappa_1, Pi d e> over the basis e of C^1_1
  const SpMat& pi = cx.pi(2);
  Vec gpk = cx.gram(2) * (pi * k1.coeffs);
  Vec orth;
  for (auto c : cx.slice(1, 1)) {
    Vec e(cx.dim(1));
    e[c] = 1;
    Vec pde = pi * (cx.d(1) * e);
    Rat s;
    for (std::size_t i = 0; i < pde.size(); ++i)
      if (sgn(pde[i]) != 0) s += pde[i] * gpk[i];
    orth.push_back(s);
  }
  cert.checks.push_back({"pi_orthogonality", is_zero(orth), orth});
  return cert;
}

}  // namespace canonconn
