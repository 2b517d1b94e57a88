#include "canonconn/cochain.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

namespace canonconn {

namespace {

void combinations(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                  std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    combinations(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

Rat determinant(Mat m) {
  const std::size_t n = m.rows();
  Rat det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(m(p, c)) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (sgn(m(i, c)) == 0) continue;
      Rat f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

// number of elements of mask strictly below bit m
int below(std::uint32_t mask, std::size_t m) { return std::popcount(mask & ((1u << m) - 1u)); }

// sign of w_I ^ w_J relative to w_{I u J}: parity of pairs (i in I, j in J) with i > j
int merge_sign(std::uint32_t a, std::uint32_t b) {
  int inv = 0;
  for (std::uint32_t x = a; x; x &= x - 1) {
    std::size_t i = static_cast<std::size_t>(std::countr_zero(x));
    inv += below(b, i);
  }
  return (inv & 1) ? -1 : 1;
}

std::map<int, std::vector<std::size_t>> by_value(const std::vector<int>& h) {
  std::map<int, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < h.size(); ++i) out[h[i]].push_back(i);
  return out;
}

void scatter(SpMat& dst, const Mat& block, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      if (sgn(block(i, j)) != 0) dst.add(rows[i], cols[j], block(i, j));
}

SpMat sparse_identity_minus(std::size_t n, const std::vector<const SpMat*>& terms) {
  SpMat out = SpMat::identity(n);
  for (auto* t : terms)
    if (t->rows() == n && t->cols() == n) out = out - *t;
  return out;
}

void sorted_sign_args(std::vector<std::size_t>& v, int& sign) {
  sign = 1;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      if (v[i] == v[j]) sign = 0;
      if (v[i] > v[j]) {
        std::swap(v[i], v[j]);
        sign = -sign;
      }
    }
}

std::uint32_t mask_of(const std::vector<std::size_t>& v) {
  std::uint32_t m = 0;
  for (auto i : v) m |= 1u << i;
  return m;
}

}  // namespace

Complex::Complex(ExtendedAlgebra alg) : alg_(std::move(alg)) {
  const CarnotAlgebra& minus = alg_.minus();
  n_ = minus.dim();
  big_n_ = alg_.dim();
  if (n_ > 30) throw Error(ErrorKind::InvalidInput, "g_- too large for the form indexing");
  for (std::size_t a = 0; a < big_n_; ++a) value_degree_.push_back(alg_.degree(a));

  const Mat g_dual = inverse(minus.gram().gram());
  forms_.resize(n_ + 1);
  for (std::size_t k = 0; k <= n_; ++k) {
    FormSpace& f = forms_[k];
    f.k = k;
    std::vector<std::size_t> cur;
    combinations(n_, k, 0, cur, f.indices);
    for (std::size_t i = 0; i < f.indices.size(); ++i) {
      std::uint32_t m = mask_of(f.indices[i]);
      f.masks.push_back(m);
      f.lookup[m] = i;
      int h = 0;
      for (auto b : f.indices[i]) h += static_cast<int>(minus.layer_of(b));
      f.homogeneity.push_back(h);
    }
    // dual gram is block diagonal by layer, so minors vanish unless layer counts agree
    auto profile = [&](const std::vector<std::size_t>& idx) {
      std::vector<std::size_t> c(minus.step() + 1, 0);
      for (auto b : idx) ++c[minus.layer_of(b)];
      return c;
    };
    std::vector<std::vector<std::size_t>> prof;
    for (const auto& idx : f.indices) prof.push_back(profile(idx));
    f.gram = Mat(f.size(), f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = i; j < f.size(); ++j) {
        if (prof[i] != prof[j]) continue;
        Rat v = k == 0 ? Rat(1) : determinant(g_dual.select(f.indices[i], f.indices[j]));
        f.gram(i, j) = v;
        f.gram(j, i) = v;
      }
  }

  std::vector<int> layers;
  for (std::size_t i = 0; i < n_; ++i) layers.push_back(static_cast<int>(minus.layer_of(i)));
  std::sort(layers.rbegin(), layers.rend());
  s_k_.assign(n_ + 1, 0);
  for (std::size_t k = 1; k <= n_; ++k) s_k_[k] = s_k_[k - 1] + layers[k - 1];
  s_depth_ = s_k_[n_];

  // Form level: scalar differential, exterior multiplication, adjoint, pseudo-inverse.
  std::vector<std::vector<SpMat>> ext(n_ + 1);  // ext[k][m]: w -> b_m^* ^ w, wedge^k -> wedge^{k+1}
  fd_.resize(n_ + 1);
  fd_inv_.resize(n_ + 1);
  fd_adj_.resize(n_ + 1);
  for (std::size_t k = 0; k <= n_; ++k) {
    const FormSpace& src = forms_[k];
    const std::size_t tgt_dim = k < n_ ? forms_[k + 1].size() : 0;
    SpMat d(tgt_dim, src.size());
    ext[k].assign(n_, SpMat(tgt_dim, src.size()));
    if (k < n_) {
      const FormSpace& tgt = forms_[k + 1];
      for (std::size_t col = 0; col < src.size(); ++col) {
        const std::uint32_t im = src.masks[col];
        for (std::size_t m = 0; m < n_; ++m) {
          if (im & (1u << m)) continue;
          int s = (below(im, m) & 1) ? -1 : 1;
          ext[k][m].add(tgt.index_of(im | (1u << m)), col, Rat(s));
        }
        // (d w_I)(b_J) = sum_{p<q} (-1)^{i+j} w_I([b_p, b_q], rest)
        for (std::size_t ri = 0; ri < src.indices[col].size(); ++ri) {
          const std::size_t r = src.indices[col][ri];
          const std::uint32_t rest = im & ~(1u << r);
          const int sign_r = (ri & 1) ? -1 : 1;
          for (std::size_t p = 0; p < n_; ++p) {
            if (rest & (1u << p)) continue;
            for (std::size_t q = p + 1; q < n_; ++q) {
              if (rest & (1u << q)) continue;
              const Rat& c = minus.bracket(p, q)[r];
              if (sgn(c) == 0) continue;
              const std::uint32_t jm = rest | (1u << p) | (1u << q);
              const int i = below(jm, p), j = below(jm, q);
              const int s = ((i + j) & 1 ? -1 : 1) * sign_r;
              d.add(tgt.index_of(jm), col, s * c);
            }
          }
        }
      }
      for (auto& e : ext[k]) e.finalize();
    }
    d.finalize();
    fd_[k] = d;

    SpMat inv(src.size(), tgt_dim), adj(src.size(), tgt_dim);
    if (k < n_) {
      const FormSpace& tgt = forms_[k + 1];
      auto src_slices = by_value(src.homogeneity);
      auto tgt_slices = by_value(tgt.homogeneity);
      for (const auto& [h, cols] : src_slices) {
        auto it = tgt_slices.find(h);
        if (it == tgt_slices.end()) continue;
        const auto& rows = it->second;
        Mat block = d.dense_block(rows, cols);
        IPSpace dom(src.gram.select(cols, cols)), cod(tgt.gram.select(rows, rows));
        scatter(inv, gram_pinv(block, dom, cod), cols, rows);
        scatter(adj, gram_adjoint(block, dom, cod), cols, rows);
      }
    }
    inv.finalize();
    adj.finalize();
    fd_inv_[k] = inv;
    fd_adj_[k] = adj;
  }

  // Lift to C^k = g (x) wedge^k.
  const Mat& gg = alg_.gram().gram();
  const Mat gg_inv = inverse(gg);
  SpMat id_g = SpMat::identity(big_n_);
  std::vector<SpMat> ad(n_), ad_adj(n_);
  for (std::size_t m = 0; m < n_; ++m) {
    ad[m] = SpMat::from_dense(alg_.ad(m));
    ad_adj[m] = SpMat::from_dense(gg_inv * alg_.ad(m).transpose() * gg);
  }
  std::vector<Mat> fgram_inv(n_ + 1);
  for (std::size_t k = 0; k <= n_; ++k) fgram_inv[k] = inverse(forms_[k].gram);

  d_.resize(n_ + 1);
  db_.resize(n_ + 1);
  d_adj_.resize(n_ + 1);
  db_adj_.resize(n_ + 1);
  db_inv_.resize(n_ + 1);
  gram_.resize(n_ + 1);
  for (std::size_t k = 0; k <= n_; ++k) {
    gram_[k] = kron(SpMat::from_dense(gg), SpMat::from_dense(forms_[k].gram));
    db_[k] = kron(id_g, fd_[k]);
    db_adj_[k] = kron(id_g, fd_adj_[k]);
    db_inv_[k] = kron(id_g, fd_inv_[k]);
    SpMat d = db_[k], da = db_adj_[k];
    if (k < n_) {
      const Mat gk1 = forms_[k + 1].gram;
      for (std::size_t m = 0; m < n_; ++m) {
        d = d + kron(ad[m], ext[k][m]);
        Mat e_adj = fgram_inv[k] * ext[k][m].transpose().to_dense() * gk1;
        da = da + kron(ad_adj[m], SpMat::from_dense(e_adj));
      }
    }
    d_[k] = d;
    d_adj_[k] = da;
  }

  pi_.resize(n_ + 1);
  p_.resize(n_ + 1);
  for (std::size_t k = 0; k <= n_; ++k) {
    SpMat a = db_inv_[k] * db_[k];
    SpMat pa = db_inv_[k] * d_[k];
    if (k == 0) {
      pi_[k] = sparse_identity_minus(dim(k), {&a});
      p_[k] = sparse_identity_minus(dim(k), {&pa});
    } else {
      SpMat b = db_[k - 1] * db_inv_[k - 1];
      SpMat pb = d_[k - 1] * db_inv_[k - 1];
      pi_[k] = sparse_identity_minus(dim(k), {&a, &b});
      p_[k] = sparse_identity_minus(dim(k), {&pa, &pb});
    }
  }
}

int Complex::homogeneity(std::size_t k, std::size_t idx) const {
  const std::size_t fs = forms_[k].size();
  return value_degree_[idx / fs] + forms_[k].homogeneity[idx % fs];
}

int Complex::form_homogeneity(std::size_t k, std::size_t idx) const {
  return forms_[k].homogeneity[idx % forms_[k].size()];
}

std::vector<int> Complex::homogeneities(std::size_t k) const {
  std::set<int> hs;
  for (std::size_t i = 0; i < dim(k); ++i) hs.insert(homogeneity(k, i));
  return {hs.begin(), hs.end()};
}

std::vector<std::size_t> Complex::slice(std::size_t k, int h) const {
  std::vector<std::size_t> out;
  if (k > n_) return out;
  for (std::size_t i = 0; i < dim(k); ++i)
    if (homogeneity(k, i) == h) out.push_back(i);
  return out;
}

SpMat Complex::db_inv_into(std::size_t k) const {
  if (k == 0) return SpMat(0, dim(0));
  return db_inv_[k - 1];
}

SpMat Complex::p_power(std::size_t k, std::size_t m) const {
  SpMat out = SpMat::identity(dim(k));
  for (std::size_t i = 0; i < m; ++i) out = p_[k] * out;
  return out;
}

SpMat Complex::p_infty(std::size_t k) const {
  return p_power(k, static_cast<std::size_t>(std::max(0, s_k_[k] - static_cast<int>(k))));
}

Rat Complex::inner(const Cochain& x, const Cochain& y) const {
  Vec gy = gram_.at(x.k) * y.coeffs;
  Rat s;
  for (std::size_t i = 0; i < gy.size(); ++i)
    if (sgn(x.coeffs[i]) != 0) s += x.coeffs[i] * gy[i];
  return s;
}

// ---------------------------------------------------------------------------

Cochain zero_cochain(const Complex& cx, std::size_t k) { return {k, Vec(cx.dim(k))}; }

Cochain basis_cochain(const Complex& cx, std::size_t a, std::vector<std::size_t> form) {
  int sign = 1;
  sorted_sign_args(form, sign);
  Cochain c = zero_cochain(cx, form.size());
  if (sign == 0) return c;
  c.coeffs[cx.index(form.size(), a, cx.forms(form.size()).index_of(mask_of(form)))] = sign;
  return c;
}

Vec scalar_form(const Complex& cx, std::vector<std::size_t> form) {
  int sign = 1;
  sorted_sign_args(form, sign);
  Vec v(cx.forms(form.size()).size());
  if (sign != 0) v[cx.forms(form.size()).index_of(mask_of(form))] = sign;
  return v;
}

Cochain wedge(const Complex& cx, const Cochain& alpha, std::size_t j, std::span<const Rat> beta) {
  const std::size_t k = alpha.k;
  Cochain out = zero_cochain(cx, k + j);
  if (k + j > cx.max_k()) return out;
  const FormSpace& fa = cx.forms(k);
  const FormSpace& fb = cx.forms(j);
  const FormSpace& fo = cx.forms(k + j);
  for (std::size_t idx = 0; idx < alpha.coeffs.size(); ++idx) {
    if (sgn(alpha.coeffs[idx]) == 0) continue;
    const std::size_t a = idx / fa.size(), fi = idx % fa.size();
    for (std::size_t fj = 0; fj < fb.size(); ++fj) {
      if (sgn(beta[fj]) == 0 || (fa.masks[fi] & fb.masks[fj])) continue;
      const int s = merge_sign(fa.masks[fi], fb.masks[fj]);
      out.coeffs[cx.index(k + j, a, fo.index_of(fa.masks[fi] | fb.masks[fj]))] += s * alpha.coeffs[idx] * beta[fj];
    }
  }
  return out;
}

Cochain bracket(const Complex& cx, const Cochain& alpha, const Cochain& beta) {
  const std::size_t k = alpha.k, j = beta.k;
  Cochain out = zero_cochain(cx, k + j);
  if (k + j > cx.max_k()) return out;
  const FormSpace& fa = cx.forms(k);
  const FormSpace& fb = cx.forms(j);
  const FormSpace& fo = cx.forms(k + j);
  const ExtendedAlgebra& g = cx.algebra();
  for (std::size_t x = 0; x < alpha.coeffs.size(); ++x) {
    if (sgn(alpha.coeffs[x]) == 0) continue;
    const std::size_t a = x / fa.size(), fi = x % fa.size();
    for (std::size_t y = 0; y < beta.coeffs.size(); ++y) {
      if (sgn(beta.coeffs[y]) == 0) continue;
      const std::size_t b = y / fb.size(), fj = y % fb.size();
      if (fa.masks[fi] & fb.masks[fj]) continue;
      const Vec& ab = g.bracket(a, b);
      const int s = merge_sign(fa.masks[fi], fb.masks[fj]);
      const std::size_t fo_idx = fo.index_of(fa.masks[fi] | fb.masks[fj]);
      for (std::size_t c = 0; c < ab.size(); ++c)
        if (sgn(ab[c]) != 0) out.coeffs[cx.index(k + j, c, fo_idx)] += s * ab[c] * alpha.coeffs[x] * beta.coeffs[y];
    }
  }
  return out;
}

Vec evaluate(const Complex& cx, const Cochain& alpha, std::span<const std::size_t> args) {
  std::vector<std::size_t> v(args.begin(), args.end());
  int sign = 1;
  sorted_sign_args(v, sign);
  Vec out(cx.big_n());
  if (sign == 0) return out;
  const FormSpace& f = cx.forms(alpha.k);
  const std::size_t fi = f.index_of(mask_of(v));
  for (std::size_t a = 0; a < cx.big_n(); ++a) out[a] = sign * alpha.coeffs[cx.index(alpha.k, a, fi)];
  return out;
}

Cochain identity_cochain(const Complex& cx) {
  Cochain id = zero_cochain(cx, 1);
  for (std::size_t m = 0; m < cx.n(); ++m) id.coeffs[cx.index(1, m, m)] = 1;
  return id;
}

SpMat interior(const Complex& cx, std::size_t k, std::size_t m) {
  if (k == 0) return SpMat(0, cx.dim(0));
  const auto& src = cx.forms(k);
  const auto& dst = cx.forms(k - 1);
  SpMat out(cx.dim(k - 1), cx.dim(k));
  for (std::size_t f = 0; f < src.size(); ++f) {
    std::uint32_t mask = src.masks[f];
    if (!(mask & (1u << m))) continue;
    Rat sign = below(mask, m) % 2 ? -1 : 1;
    std::size_t g = dst.index_of(mask & ~(1u << m));
    for (std::size_t a = 0; a < cx.big_n(); ++a) out.add(cx.index(k - 1, a, g), cx.index(k, a, f), sign);
  }
  out.finalize();
  return out;
}

Cochain homogeneous_part(const Complex& cx, const Cochain& x, int h) {
  Cochain out = zero_cochain(cx, x.k);
  for (std::size_t i = 0; i < x.coeffs.size(); ++i)
    if (cx.homogeneity(x.k, i) == h) out.coeffs[i] = x.coeffs[i];
  return out;
}

Cochain apply(const SpMat& op, std::size_t k_out, const Cochain& x) { return {k_out, op * x.coeffs}; }

Cochain operator+(const Cochain& x, const Cochain& y) { return {x.k, x.coeffs + y.coeffs}; }
Cochain operator-(const Cochain& x, const Cochain& y) { return {x.k, x.coeffs - y.coeffs}; }

Cochain p_infty_characterize(const Complex& cx, const Cochain& alpha) {
  const std::size_t k = alpha.k;
  Cochain beta = apply(cx.p_infty(k), k, alpha);
  auto fail = [](const char* what) { throw Error(ErrorKind::CharacterizationFailed, what); };
  if (cx.pi(k) * alpha.coeffs != cx.pi(k) * beta.coeffs) fail("Pi alpha != Pi beta");
  if (k < cx.max_k() && !is_zero(cx.db_inv(k) * (cx.d(k) * beta.coeffs))) fail("db^-1 d beta != 0");
  if (!is_zero(cx.db_inv_into(k) * beta.coeffs)) fail("db^-1 beta != 0");
  if (k == 1) {
    const auto& minus = cx.algebra().minus();
    for (std::size_t i = 0; i < minus.layer_dim(1); ++i)
      for (std::size_t a = 0; a < cx.big_n(); ++a)
        if (alpha.coeffs[cx.index(1, a, i)] != beta.coeffs[cx.index(1, a, i)]) fail("restriction to g_-1 differs");
  }
  return beta;
}

std::size_t characterization_kernel_dim(const Complex& cx, std::size_t k) {
  std::size_t total = 0;
  SpMat dbd = k < cx.max_k() ? cx.db_inv(k) * cx.d(k) : SpMat(0, cx.dim(k));
  SpMat dbi = cx.db_inv_into(k);
  for (int h : cx.homogeneities(k)) {
    auto cols = cx.slice(k, h);
    auto lower = k > 0 ? cx.slice(k - 1, h) : std::vector<std::size_t>{};
    Mat a = cx.pi(k).dense_block(cols, cols);
    Mat b = dbd.dense_block(cols, cols);
    Mat c = dbi.dense_block(lower, cols);
    Mat sys = Mat::vstack({&a, &b, &c});
    total += cols.size() - rank(sys);
  }
  return total;
}

bool tanaka_rigidity(const Complex& cx) {
  auto cols = cx.slice(1, 1);
  auto rows = cx.slice(2, 1);
  return rank(cx.d(1).dense_block(rows, cols)) == cols.size();
}

std::vector<IdentityCheck> check_identities(const Complex& cx, std::size_t k) {
  std::vector<IdentityCheck> out;
  const std::size_t n = cx.max_k();
  auto zero = [](const SpMat& m) { return m.is_zero(); };
  if (k < n) {
    out.push_back({"d_squared_zero", zero(cx.d(k + 1) * cx.d(k))});
    out.push_back({"db_squared_zero", zero(cx.db(k + 1) * cx.db(k))});
    out.push_back({"db_inv_squared_zero", zero(cx.db_inv(k) * cx.db_inv(k + 1))});
  }
  const SpMat& pi = cx.pi(k);
  out.push_back({"pi_idempotent", pi * pi == pi});
  out.push_back({"pi_self_adjoint", cx.gram(k) * pi == pi.transpose() * cx.gram(k)});
  const auto e = static_cast<std::size_t>(std::max(0, cx.s_k(k) - static_cast<int>(k)));
  SpMat pinf = cx.p_power(k, e);
  out.push_back({"p_power_stable", cx.p(k) * pinf == pinf});
  SpMat ps = pinf;
  for (int i = static_cast<int>(e); i < cx.depth(); ++i) ps = cx.p(k) * ps;
  out.push_back({"p_depth_stable", cx.p(k) * ps == ps});
  if (k < n) out.push_back({"d_commutes_p_infty", cx.d(k) * pinf == cx.p_infty(k + 1) * cx.d(k)});
  if (k == 2) out.push_back({"db_inv_equals_db_adjoint", cx.db_inv(1) == cx.db_adj(1)});
  return out;
}

std::vector<IdentityCheck> p_infty_pi_relations(const Complex& cx, std::size_t k) {
  SpMat pinf = cx.p_infty(k);
  const SpMat& pi = cx.pi(k);
  return {{"p_infty_pi_equals_p_infty", pinf * pi == pinf}, {"pi_p_infty_equals_pi", pi * pinf == pi}};
}

std::vector<SliceDims> slice_dimensions(const Complex& cx, std::size_t k) {
  std::vector<SliceDims> out;
  SpMat pinf = cx.p_infty(k);
  SpMat dt = k > 0 ? cx.d(k - 1) * cx.db_inv(k - 1) : SpMat(cx.dim(k), cx.dim(k));
  for (int h : cx.homogeneities(k)) {
    SliceDims s;
    s.homogeneity = h;
    auto idx = cx.slice(k, h);
    s.total = idx.size();
    auto upper = cx.slice(k + 1, h);
    auto lower = k > 0 ? cx.slice(k - 1, h) : std::vector<std::size_t>{};
    s.t = rank(cx.db_inv(k).dense_block(idx, upper));
    s.d_t = rank(dt.dense_block(idx, idx));
    s.p = rank(pinf.dense_block(idx, idx));
    const std::size_t db_in = k > 0 ? rank(cx.db(k - 1).dense_block(idx, lower)) : 0;
    s.e0 = s.total - s.t - db_in;
    out.push_back(s);
  }
  return out;
}

}  // namespace canonconn
