#include "canonconn/carnot.hpp"

#include <sstream>

namespace canonconn {

namespace {

Vec combine_bracket(const std::vector<Vec>& consts, std::size_t n, std::size_t out_dim, const Vec& u, const Vec& v) {
  Vec out(out_dim);
  for (std::size_t a = 0; a < n; ++a) {
    if (sgn(u[a]) == 0) continue;
    for (std::size_t b = 0; b < n; ++b) {
      if (sgn(v[b]) == 0) continue;
      const Vec& c = consts[a * n + b];
      for (std::size_t k = 0; k < out_dim; ++k)
        if (sgn(c[k]) != 0) out[k] += u[a] * v[b] * c[k];
    }
  }
  return out;
}

Vec unit(std::size_t n, std::size_t i) {
  Vec v(n);
  v[i] = 1;
  return v;
}

std::string triple(std::size_t a, std::size_t b, std::size_t c) {
  std::ostringstream os;
  os << "(" << a << ", " << b << ", " << c << ")";
  return os.str();
}

}  // namespace

Rat wedge_pair(const Mat& g, std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
  return g(a, c) * g(b, d) - g(a, d) * g(b, c);
}

CarnotAlgebra CarnotAlgebra::build(const CarnotSpec& spec) {
  CarnotAlgebra alg;
  alg.spec_ = spec;
  if (spec.step == 0 || spec.layer_dims.size() != spec.step)
    throw Error(ErrorKind::InvalidInput, "layer_dims must have one entry per layer");
  std::size_t n = 0;
  for (std::size_t l = 0; l < spec.step; ++l) {
    if (spec.layer_dims[l] == 0) throw Error(ErrorKind::NotStratified, "layer " + std::to_string(l + 1) + " is empty");
    alg.offsets_.push_back(n);
    for (std::size_t i = 0; i < spec.layer_dims[l]; ++i) alg.layer_of_.push_back(l + 1);
    n += spec.layer_dims[l];
  }
  alg.dim_ = n;
  const std::size_t n1 = spec.layer_dims[0];
  if (spec.gram_minus1.rows() != n1 || spec.gram_minus1.cols() != n1)
    throw Error(ErrorKind::ShapeMismatch, "gram_minus1 must be n1 x n1");
  if (!is_positive_definite(spec.gram_minus1))
    throw Error(ErrorKind::GramNotSPD, "gram_minus1 is not symmetric positive definite");

  if (spec.labels.empty()) {
    for (std::size_t i = 0; i < n; ++i) alg.labels_.push_back("b" + std::to_string(i + 1));
  } else {
    if (spec.labels.size() != n) throw Error(ErrorKind::InvalidInput, "label count does not match dimension");
    alg.labels_ = spec.labels;
  }

  alg.consts_.assign(n * n, Vec(n));
  std::vector<char> set(n * n, 0);
  for (const auto& e : spec.brackets) {
    if (e.left >= n || e.right >= n || e.result.size() != n)
      throw Error(ErrorKind::ShapeMismatch, "bracket entry out of range");
    if (e.left == e.right) {
      if (!is_zero(e.result))
        throw Error(ErrorKind::NotAntisymmetric, "[" + alg.labels_[e.left] + ", " + alg.labels_[e.left] + "] != 0");
      continue;
    }
    std::size_t ij = e.left * n + e.right, ji = e.right * n + e.left;
    Vec neg = Rat(-1) * e.result;
    if ((set[ij] && alg.consts_[ij] != e.result) || (set[ji] && alg.consts_[ji] != neg))
      throw Error(ErrorKind::NotAntisymmetric,
                  "inconsistent entries for [" + alg.labels_[e.left] + ", " + alg.labels_[e.right] + "]");
    alg.consts_[ij] = e.result;
    alg.consts_[ji] = neg;
    set[ij] = set[ji] = 1;
  }

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (sgn(alg.consts_[i * n + j][k]) != 0 && alg.layer_of_[k] != alg.layer_of_[i] + alg.layer_of_[j])
          throw Error(ErrorKind::GradingViolation, "[" + alg.labels_[i] + ", " + alg.labels_[j] +
                                                       "] has a component on " + alg.labels_[k]);

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        Vec bi = unit(n, i), bj = unit(n, j), bk = unit(n, k);
        Vec s = alg.bracket(bi, alg.bracket(bj, bk)) + alg.bracket(bj, alg.bracket(bk, bi)) +
                alg.bracket(bk, alg.bracket(bi, bj));
        if (!is_zero(s)) throw Error(ErrorKind::JacobiFails, "Jacobi identity fails on " + triple(i, j, k));
      }

  for (std::size_t j = 1; j < spec.step; ++j) {
    const std::size_t target = alg.offsets_[j], tdim = spec.layer_dims[j];
    std::vector<Vec> cols;
    for (std::size_t a = 0; a < n1; ++a)
      for (std::size_t c = alg.offsets_[j - 1]; c < alg.offsets_[j - 1] + spec.layer_dims[j - 1]; ++c) {
        const Vec& v = alg.consts_[a * n + c];
        cols.emplace_back(v.begin() + static_cast<std::ptrdiff_t>(target),
                          v.begin() + static_cast<std::ptrdiff_t>(target + tdim));
      }
    if (rank(Mat::from_columns(cols, tdim)) < tdim)
      throw Error(ErrorKind::NotStratified, "[g_-1, g_-" + std::to_string(j) + "] does not fill layer " +
                                                std::to_string(j + 1));
  }

  // Inner products layer by layer.
  Mat g(n, n);
  for (std::size_t a = 0; a < n1; ++a)
    for (std::size_t b = 0; b < n1; ++b) g(a, b) = spec.gram_minus1(a, b);
  for (std::size_t layer = 2; layer <= spec.step; ++layer) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    Mat l = alg.wedge_bracket_map(layer, &pairs);
    Mat dom(pairs.size(), pairs.size());
    for (std::size_t p = 0; p < pairs.size(); ++p)
      for (std::size_t q = 0; q < pairs.size(); ++q)
        dom(p, q) = wedge_pair(g, pairs[p].first, pairs[p].second, pairs[q].first, pairs[q].second);
    IPSpace induced = induced_gram(l, IPSpace(dom));
    const std::size_t off = alg.offsets_[layer - 1];
    for (std::size_t a = 0; a < induced.dim(); ++a)
      for (std::size_t b = 0; b < induced.dim(); ++b) g(off + a, off + b) = induced.gram()(a, b);
  }
  alg.gram_ = IPSpace(std::move(g));
  return alg;
}

Vec CarnotAlgebra::bracket(const Vec& u, const Vec& v) const { return combine_bracket(consts_, dim_, dim_, u, v); }

Mat CarnotAlgebra::wedge_bracket_map(std::size_t layer, std::vector<std::pair<std::size_t, std::size_t>>* pairs) const {
  std::vector<std::pair<std::size_t, std::size_t>> ps;
  for (std::size_t a = 0; a < dim_; ++a)
    for (std::size_t b = a + 1; b < dim_; ++b)
      if (layer_of_[a] + layer_of_[b] == layer) ps.emplace_back(a, b);
  const std::size_t off = offsets_.at(layer - 1), ld = layer_dim(layer);
  Mat l(ld, ps.size());
  for (std::size_t p = 0; p < ps.size(); ++p) {
    const Vec& v = consts_[ps[p].first * dim_ + ps[p].second];
    for (std::size_t k = 0; k < ld; ++k) l(k, p) = v[off + k];
  }
  if (pairs) *pairs = std::move(ps);
  return l;
}

IPSpace induced_inner_products(const CarnotAlgebra& alg) { return alg.gram(); }

std::vector<Mat> isometry_algebra(const CarnotAlgebra& alg) {
  const std::size_t n = alg.dim();
  // variable index of D[c][a] (coefficient of b_c in D b_a) for c, a in the same layer
  std::vector<std::ptrdiff_t> var(n * n, -1);
  std::size_t nv = 0;
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t a = 0; a < n; ++a)
      if (alg.layer_of(c) == alg.layer_of(a)) var[c * n + a] = static_cast<std::ptrdiff_t>(nv++);

  std::vector<Vec> rows;
  auto add_coef = [&](Vec& row, std::size_t c, std::size_t a, const Rat& x) {
    if (var[c * n + a] >= 0 && sgn(x) != 0) row[static_cast<std::size_t>(var[c * n + a])] += x;
  };
  // Leibniz: D[b_i,b_j] - [D b_i, b_j] - [b_i, D b_j] = 0
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        Vec row(nv);
        const Vec& cij = alg.bracket(i, j);
        for (std::size_t l = 0; l < n; ++l) add_coef(row, k, l, cij[l]);
        for (std::size_t l = 0; l < n; ++l) {
          add_coef(row, l, i, -alg.bracket(l, j)[k]);
          add_coef(row, l, j, -alg.bracket(i, l)[k]);
        }
        if (!is_zero(row)) rows.push_back(std::move(row));
      }
  // skew on g_{-1}
  const Mat& g = alg.gram().gram();
  const std::size_t n1 = alg.layer_dim(1);
  for (std::size_t a = 0; a < n1; ++a)
    for (std::size_t b = a; b < n1; ++b) {
      Vec row(nv);
      for (std::size_t c = 0; c < n1; ++c) {
        add_coef(row, c, b, g(a, c));
        add_coef(row, c, a, g(b, c));
      }
      if (!is_zero(row)) rows.push_back(std::move(row));
    }

  Mat sys(rows.size(), nv);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t v = 0; v < nv; ++v) sys(r, v) = rows[r][v];
  Mat ker = decompose(sys).kernel_basis;

  std::vector<Mat> basis;
  for (std::size_t k = 0; k < ker.cols(); ++k) {
    Mat d(n, n);
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t a = 0; a < n; ++a)
        if (var[c * n + a] >= 0) d(c, a) = ker(static_cast<std::size_t>(var[c * n + a]), k);
    basis.push_back(std::move(d));
  }
  return basis;
}

Rat frobenius_pair(const Mat& s, const Mat& t, const Mat& gram, const Mat& gram_inv) {
  Mat m = s.transpose() * gram * t * gram_inv;
  Rat tr;
  for (std::size_t i = 0; i < m.rows(); ++i) tr += m(i, i);
  return tr;
}

ExtendedAlgebra ExtendedAlgebra::extend(const CarnotAlgebra& alg, std::vector<Mat> g0_basis) {
  ExtendedAlgebra ext;
  ext.minus_ = alg;
  ext.g0_ = std::move(g0_basis);
  const std::size_t n = alg.dim(), m = ext.g0_.size(), N = n + m;

  ext.g0_flat_ = Mat(n * n, m);
  for (std::size_t t = 0; t < m; ++t) {
    if (ext.g0_[t].rows() != n || ext.g0_[t].cols() != n)
      throw Error(ErrorKind::ShapeMismatch, "g0 basis element has wrong shape");
    for (std::size_t i = 0; i < n * n; ++i) ext.g0_flat_(i, t) = ext.g0_[t].entries()[i];
  }
  if (m > 0) {
    if (rank(ext.g0_flat_) < m) throw Error(ErrorKind::InvalidInput, "g0 basis is linearly dependent");
    Mat ft = ext.g0_flat_.transpose();
    ext.g0_left_inv_ = inverse(ft * ext.g0_flat_) * ft;
  }

  const Mat& g = alg.gram().gram();
  Mat g_inv = inverse(g);
  Mat g0gram(m, m);
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t t = 0; t < m; ++t) g0gram(s, t) = frobenius_pair(ext.g0_[s], ext.g0_[t], g, g_inv);
  ext.gram_g0_ = IPSpace(g0gram);
  Mat full(N, N);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) full(a, b) = g(a, b);
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t t = 0; t < m; ++t) full(n + s, n + t) = g0gram(s, t);
  ext.gram_ = IPSpace(std::move(full));

  ext.consts_.assign(N * N, Vec(N));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t k = 0; k < n; ++k) ext.consts_[a * N + b][k] = alg.bracket(a, b)[k];
  for (std::size_t t = 0; t < m; ++t)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t k = 0; k < n; ++k) {
        ext.consts_[(n + t) * N + a][k] = ext.g0_[t](k, a);
        ext.consts_[a * N + (n + t)][k] = -ext.g0_[t](k, a);
      }
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t t = 0; t < m; ++t) {
      Mat comm = ext.g0_[s] * ext.g0_[t] - ext.g0_[t] * ext.g0_[s];
      Vec c = ext.g0_coords(comm);
      for (std::size_t k = 0; k < m; ++k) ext.consts_[(n + s) * N + (n + t)][n + k] = c[k];
    }

  ext.ad_.assign(N, Mat(N, N));
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t k = 0; k < N; ++k) ext.ad_[a](k, b) = ext.consts_[a * N + b][k];

  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = a + 1; b < N; ++b)
      for (std::size_t c = b + 1; c < N; ++c) {
        Vec ea = unit(N, a), eb = unit(N, b), ec = unit(N, c);
        Vec s = ext.bracket(ea, ext.bracket(eb, ec)) + ext.bracket(eb, ext.bracket(ec, ea)) +
                ext.bracket(ec, ext.bracket(ea, eb));
        if (!is_zero(s)) throw Error(ErrorKind::JacobiFails, "Jacobi identity fails on g at " + triple(a, b, c));
      }
  return ext;
}

int ExtendedAlgebra::degree(std::size_t a) const {
  return a < minus_.dim() ? -static_cast<int>(minus_.layer_of(a)) : 0;
}

Vec ExtendedAlgebra::bracket(const Vec& u, const Vec& v) const { return combine_bracket(consts_, dim(), dim(), u, v); }

Vec ExtendedAlgebra::g0_coords(const Mat& derivation) const {
  const std::size_t n = minus_.dim(), m = g0_.size();
  Vec flat(derivation.entries().begin(), derivation.entries().end());
  if (flat.size() != n * n) throw Error(ErrorKind::ShapeMismatch, "derivation has wrong shape");
  if (m == 0) {
    if (!is_zero(flat)) throw Error(ErrorKind::InvalidInput, "matrix is not in g0");
    return {};
  }
  Vec c = g0_left_inv_ * flat;
  if (g0_flat_ * c != flat) throw Error(ErrorKind::InvalidInput, "matrix is not in g0");
  return c;
}

Mat ExtendedAlgebra::g0_matrix(std::span<const Rat> coords) const {
  const std::size_t n = minus_.dim();
  Mat out(n, n);
  for (std::size_t t = 0; t < g0_.size(); ++t)
    if (sgn(coords[t]) != 0) out = out + coords[t] * g0_[t];
  return out;
}

}  // namespace canonconn
