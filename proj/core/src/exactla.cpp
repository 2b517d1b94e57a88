#include "canonconn/exactla.hpp"

#include <algorithm>
#include <cctype>

namespace canonconn {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::NotSurjective: return "NotSurjective";
    case ErrorKind::GramNotSPD: return "GramNotSPD";
    case ErrorKind::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorKind::JacobiFails: return "JacobiFails";
    case ErrorKind::NotStratified: return "NotStratified";
    case ErrorKind::GradingViolation: return "GradingViolation";
    case ErrorKind::CharacterizationFailed: return "CharacterizationFailed";
    case ErrorKind::Inconsistent: return "Inconsistent";
    case ErrorKind::NonUniqueSolution: return "NonUniqueSolution";
    case ErrorKind::NotBracketGenerating: return "NotBracketGenerating";
    case ErrorKind::SymbolMismatch: return "SymbolMismatch";
    case ErrorKind::UnsupportedModel: return "UnsupportedModel";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::ShapeMismatch, what);
}

}  // namespace

Rat parse_rat(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw Error(ErrorKind::Parse, "empty rational");
  std::size_t i = 0;
  if (text[0] == '+' || text[0] == '-') ++i;
  bool seen_slash = false;
  bool digit_before = false, digit_after = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '/' && !seen_slash) {
      seen_slash = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      (seen_slash ? digit_after : digit_before) = true;
    } else {
      throw Error(ErrorKind::Parse, "bad rational '" + std::string(text) + "'");
    }
  }
  if (!digit_before || (seen_slash && !digit_after)) {
    throw Error(ErrorKind::Parse, "bad rational '" + std::string(text) + "'");
  }
  std::string s(text);
  if (s[0] == '+') s.erase(0, 1);
  Rat r;
  if (r.set_str(s, 10) != 0) throw Error(ErrorKind::Parse, "bad rational '" + s + "'");
  if (r.get_den() == 0) throw Error(ErrorKind::Parse, "zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

std::string to_string(const Rat& value) { return value.get_str(); }

Vec zero_vec(std::size_t n) { return Vec(n); }

bool is_zero(std::span<const Rat> v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return sgn(x) == 0; });
}

// ---------------------------------------------------------------------------
// Mat

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<Rat> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  require(data_.size() == rows * cols, "entry count does not match shape");
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Mat Mat::from_rows(const std::vector<std::vector<Rat>>& rows) {
  std::size_t r = rows.size();
  std::size_t c = r ? rows[0].size() : 0;
  Mat m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    require(rows[i].size() == c, "ragged rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Mat Mat::from_columns(const std::vector<Vec>& cols, std::size_t rows) {
  Mat m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    require(cols[j].size() == rows, "column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

Vec Mat::row(std::size_t r) const {
  return Vec(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
             data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

Vec Mat::col(std::size_t c) const {
  Vec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
  return v;
}

Mat Mat::transpose() const {
  Mat t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool Mat::is_zero() const { return canonconn::is_zero(data_); }

bool Mat::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

Mat Mat::select(std::span<const std::size_t> row_idx, std::span<const std::size_t> col_idx) const {
  Mat m(row_idx.size(), col_idx.size());
  for (std::size_t i = 0; i < row_idx.size(); ++i)
    for (std::size_t j = 0; j < col_idx.size(); ++j) m(i, j) = (*this)(row_idx[i], col_idx[j]);
  return m;
}

Mat Mat::select_cols(std::span<const std::size_t> col_idx) const {
  Mat m(rows_, col_idx.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < col_idx.size(); ++j) m(i, j) = (*this)(i, col_idx[j]);
  return m;
}

Mat Mat::vstack(const std::vector<const Mat*>& blocks) {
  std::size_t rows = 0, cols = blocks.empty() ? 0 : blocks[0]->cols();
  for (auto* b : blocks) {
    require(b->cols() == cols, "vstack column mismatch");
    rows += b->rows();
  }
  Mat m(rows, cols);
  std::size_t off = 0;
  for (auto* b : blocks) {
    std::copy(b->data_.begin(), b->data_.end(), m.data_.begin() + static_cast<std::ptrdiff_t>(off * cols));
    off += b->rows();
  }
  return m;
}

Mat Mat::hstack(const std::vector<const Mat*>& blocks) {
  std::size_t cols = 0, rows = blocks.empty() ? 0 : blocks[0]->rows();
  for (auto* b : blocks) {
    require(b->rows() == rows, "hstack row mismatch");
    cols += b->cols();
  }
  Mat m(rows, cols);
  std::size_t off = 0;
  for (auto* b : blocks) {
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < b->cols(); ++j) m(i, off + j) = (*b)(i, j);
    off += b->cols();
  }
  return m;
}

Mat operator*(const Mat& a, const Mat& b) {
  require(a.cols_ == b.rows_, "product shape mismatch");
  Mat c(a.rows_, b.cols_);
  Rat t;
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rat& aik = a(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const Rat& bkj = b(k, j);
        if (sgn(bkj) == 0) continue;
        t = aik * bkj;
        c(i, j) += t;
      }
    }
  }
  return c;
}

Vec operator*(const Mat& a, std::span<const Rat> v) {
  require(a.cols_ == v.size(), "matrix-vector shape mismatch");
  Vec out(a.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < a.cols_; ++j)
      if (sgn(a(i, j)) != 0 && sgn(v[j]) != 0) out[i] += a(i, j) * v[j];
  return out;
}

Vec operator*(const Mat& a, const Vec& v) { return a * std::span<const Rat>(v); }

Mat operator+(const Mat& a, const Mat& b) {
  require(a.rows_ == b.rows_ && a.cols_ == b.cols_, "sum shape mismatch");
  Mat c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
  return c;
}

Mat operator-(const Mat& a, const Mat& b) {
  require(a.rows_ == b.rows_ && a.cols_ == b.cols_, "difference shape mismatch");
  Mat c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
  return c;
}

Mat operator*(const Rat& s, const Mat& a) {
  Mat c = a;
  for (auto& x : c.data_) x *= s;
  return c;
}

bool operator==(const Mat& a, const Mat& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

Vec operator+(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "vector sum mismatch");
  Vec c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += b[i];
  return c;
}

Vec operator-(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "vector difference mismatch");
  Vec c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b[i];
  return c;
}

Vec operator*(const Rat& s, const Vec& v) {
  Vec c = v;
  for (auto& x : c) x *= s;
  return c;
}

// ---------------------------------------------------------------------------
// Elimination

Rref rref(Mat m) {
  Rref out;
  const std::size_t rows = m.rows(), cols = m.cols();
  std::size_t r = 0;
  Rat f;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && sgn(m(p, c)) == 0) ++p;
    if (p == rows) continue;
    if (p != r)
      for (std::size_t j = c; j < cols; ++j) std::swap(m(p, j), m(r, j));
    Rat inv = 1 / m(r, c);
    for (std::size_t j = c; j < cols; ++j)
      if (sgn(m(r, j)) != 0) m(r, j) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      f = m(i, c);
      for (std::size_t j = c; j < cols; ++j)
        if (sgn(m(r, j)) != 0) m(i, j) -= f * m(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

Decomposition decompose(const Mat& m) {
  Rref red = rref(m);
  Decomposition d;
  d.rank = red.pivots.size();
  d.image_basis = m.select_cols(red.pivots);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : red.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  d.kernel_basis = Mat(m.cols(), free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    std::size_t fc = free_cols[k];
    d.kernel_basis(fc, k) = 1;
    for (std::size_t i = 0; i < red.pivots.size(); ++i) d.kernel_basis(red.pivots[i], k) = -red.reduced(i, fc);
  }
  return d;
}

std::size_t rank(const Mat& m) { return rref(m).pivots.size(); }

std::optional<Vec> solve(const Mat& a, std::span<const Rat> b) {
  require(a.rows() == b.size(), "solve shape mismatch");
  Mat aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  Rref red = rref(std::move(aug));
  if (!red.pivots.empty() && red.pivots.back() == a.cols()) return std::nullopt;
  Vec x(a.cols());
  for (std::size_t i = 0; i < red.pivots.size(); ++i) x[red.pivots[i]] = red.reduced(i, a.cols());
  return x;
}

Mat inverse(const Mat& m) {
  require(m.rows() == m.cols(), "inverse of non-square matrix");
  const std::size_t n = m.rows();
  Mat aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  Rref red = rref(std::move(aug));
  if (red.pivots.size() < n || red.pivots[n - 1] != n - 1) throw Error(ErrorKind::Singular, "matrix is singular");
  Mat inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = red.reduced(i, n + j);
  return inv;
}

bool is_positive_definite(const Mat& m) {
  if (!m.is_symmetric()) return false;
  Mat a = m;
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    if (sgn(a(k, k)) <= 0) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (sgn(a(i, k)) == 0) continue;
      Rat f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Inner product spaces

IPSpace::IPSpace(Mat gram) : gram_(std::move(gram)) {
  if (gram_.rows() != gram_.cols()) throw Error(ErrorKind::ShapeMismatch, "gram must be square");
  if (!is_positive_definite(gram_)) throw Error(ErrorKind::GramNotSPD, "gram is not symmetric positive definite");
}

IPSpace IPSpace::standard(std::size_t n) { return IPSpace(Mat::identity(n)); }

Rat IPSpace::inner(std::span<const Rat> u, std::span<const Rat> v) const {
  require(u.size() == dim() && v.size() == dim(), "inner product length mismatch");
  Rat s;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (sgn(u[i]) == 0) continue;
    for (std::size_t j = 0; j < dim(); ++j)
      if (sgn(v[j]) != 0) s += u[i] * gram_(i, j) * v[j];
  }
  return s;
}

Mat gram_adjoint(const Mat& m, const IPSpace& dom, const IPSpace& cod) {
  require(m.cols() == dom.dim() && m.rows() == cod.dim(), "adjoint shape mismatch");
  return inverse(dom.gram()) * m.transpose() * cod.gram();
}

Mat gram_pinv(const Mat& m, const IPSpace& dom, const IPSpace& cod) {
  require(m.cols() == dom.dim() && m.rows() == cod.dim(), "pseudo-inverse shape mismatch");
  Rref red = rref(m);
  const std::size_t r = red.pivots.size();
  if (r == 0) return Mat(m.cols(), m.rows());
  // Full-rank factorization M = F R.
  Mat f = m.select_cols(red.pivots);
  Mat rr(r, m.cols());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) rr(i, j) = red.reduced(i, j);
  Mat gd_inv = inverse(dom.gram());
  Mat rt = gd_inv * rr.transpose();
  Mat ft_gc = f.transpose() * cod.gram();
  return rt * inverse(rr * rt) * inverse(ft_gc * f) * ft_gc;
}

IPSpace induced_gram(const Mat& l, const IPSpace& dom) {
  require(l.cols() == dom.dim(), "induced gram shape mismatch");
  if (rank(l) < l.rows()) throw Error(ErrorKind::NotSurjective, "map is not surjective");
  Mat li = gram_pinv(l, dom, IPSpace::standard(l.rows()));
  return IPSpace(li.transpose() * dom.gram() * li);
}

Mat orthogonal_projector(const Mat& basis, const IPSpace& space) {
  require(basis.rows() == space.dim(), "projector shape mismatch");
  Decomposition d = decompose(basis);
  if (d.rank == 0) return Mat(space.dim(), space.dim());
  const Mat& b = d.image_basis;
  Mat bt_g = b.transpose() * space.gram();
  return b * inverse(bt_g * b) * bt_g;
}

// ---------------------------------------------------------------------------
// SpMat

SpMat SpMat::identity(std::size_t n) {
  SpMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.row_data_[i].emplace_back(i, Rat(1));
  return m;
}

SpMat SpMat::from_dense(const Mat& d) {
  SpMat m(d.rows(), d.cols());
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j)
      if (sgn(d(i, j)) != 0) m.row_data_[i].emplace_back(j, d(i, j));
  return m;
}

SpMat SpMat::kron_identity(std::size_t count, const Mat& block) {
  SpMat m(count * block.rows(), count * block.cols());
  for (std::size_t b = 0; b < count; ++b)
    for (std::size_t i = 0; i < block.rows(); ++i)
      for (std::size_t j = 0; j < block.cols(); ++j)
        if (sgn(block(i, j)) != 0) m.row_data_[b * block.rows() + i].emplace_back(b * block.cols() + j, block(i, j));
  return m;
}

std::size_t SpMat::nnz() const {
  std::size_t n = 0;
  for (const auto& r : row_data_) n += r.size();
  return n;
}

void SpMat::add(std::size_t r, std::size_t c, const Rat& value) {
  require(r < rows_ && c < cols_, "sparse index out of range");
  if (sgn(value) == 0) return;
  row_data_[r].emplace_back(c, value);
}

void SpMat::finalize() {
  for (auto& r : row_data_) {
    std::sort(r.begin(), r.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
    std::vector<Entry> merged;
    merged.reserve(r.size());
    for (auto& e : r) {
      if (!merged.empty() && merged.back().first == e.first) {
        merged.back().second += e.second;
      } else {
        merged.push_back(std::move(e));
      }
    }
    std::erase_if(merged, [](const Entry& e) { return sgn(e.second) == 0; });
    r = std::move(merged);
  }
}

Rat SpMat::at(std::size_t r, std::size_t c) const {
  for (const auto& [j, v] : row_data_[r])
    if (j == c) return v;
  return Rat(0);
}

Mat SpMat::to_dense() const {
  Mat d(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto& [j, v] : row_data_[i]) d(i, j) += v;
  return d;
}

Mat SpMat::dense_block(std::span<const std::size_t> row_idx, std::span<const std::size_t> col_idx) const {
  std::vector<std::ptrdiff_t> pos(cols_, -1);
  for (std::size_t k = 0; k < col_idx.size(); ++k) pos[col_idx[k]] = static_cast<std::ptrdiff_t>(k);
  Mat d(row_idx.size(), col_idx.size());
  for (std::size_t i = 0; i < row_idx.size(); ++i)
    for (const auto& [j, v] : row_data_[row_idx[i]])
      if (pos[j] >= 0) d(i, static_cast<std::size_t>(pos[j])) += v;
  return d;
}

SpMat SpMat::transpose() const {
  SpMat t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto& [j, v] : row_data_[i]) t.row_data_[j].emplace_back(i, v);
  return t;
}

bool SpMat::is_zero() const {
  for (const auto& r : row_data_)
    for (const auto& e : r)
      if (sgn(e.second) != 0) return false;
  return true;
}

SpMat operator*(const SpMat& a, const SpMat& b) {
  require(a.cols_ == b.rows_, "sparse product shape mismatch");
  SpMat c(a.rows_, b.cols_);
  std::vector<Rat> acc(b.cols_);
  std::vector<char> hit(b.cols_, 0);
  std::vector<std::size_t> touched;
  Rat t;
  for (std::size_t i = 0; i < a.rows_; ++i) {
    touched.clear();
    for (const auto& [k, av] : a.row_data_[i]) {
      for (const auto& [j, bv] : b.row_data_[k]) {
        t = av * bv;
        acc[j] += t;
        if (!hit[j]) {
          hit[j] = 1;
          touched.push_back(j);
        }
      }
    }
    std::sort(touched.begin(), touched.end());
    auto& out = c.row_data_[i];
    for (auto j : touched) {
      if (sgn(acc[j]) != 0) out.emplace_back(j, acc[j]);
      acc[j] = 0;
      hit[j] = 0;
    }
  }
  return c;
}

Vec operator*(const SpMat& a, std::span<const Rat> v) {
  require(a.cols_ == v.size(), "sparse matrix-vector shape mismatch");
  Vec out(a.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (const auto& [j, x] : a.row_data_[i])
      if (sgn(v[j]) != 0) out[i] += x * v[j];
  return out;
}

Vec operator*(const SpMat& a, const Vec& v) { return a * std::span<const Rat>(v); }

SpMat kron(const SpMat& a, const SpMat& b) {
  SpMat c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t r = 0; r < b.rows(); ++r)
      for (const auto& [j, av] : a.row(i))
        for (const auto& [s, bv] : b.row(r)) c.add(i * b.rows() + r, j * b.cols() + s, av * bv);
  c.finalize();
  return c;
}

namespace {

SpMat combine(const SpMat& a, const SpMat& b, int sign) {
  SpMat c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (const auto& [j, v] : a.row(i)) c.add(i, j, v);
    for (const auto& [j, v] : b.row(i)) c.add(i, j, sign > 0 ? Rat(v) : Rat(-v));
  }
  c.finalize();
  return c;
}

}  // namespace

SpMat operator+(const SpMat& a, const SpMat& b) {
  require(a.rows_ == b.rows_ && a.cols_ == b.cols_, "sparse sum shape mismatch");
  return combine(a, b, 1);
}

SpMat operator-(const SpMat& a, const SpMat& b) {
  require(a.rows_ == b.rows_ && a.cols_ == b.cols_, "sparse difference shape mismatch");
  return combine(a, b, -1);
}

SpMat operator*(const Rat& s, const SpMat& a) {
  SpMat c(a.rows_, a.cols_);
  if (sgn(s) == 0) return c;
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (const auto& [j, v] : a.row_data_[i]) c.row_data_[i].emplace_back(j, s * v);
  return c;
}

bool operator==(const SpMat& a, const SpMat& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
  return (a - b).is_zero();
}

}  // namespace canonconn
