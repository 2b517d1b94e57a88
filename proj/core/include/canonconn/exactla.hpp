#pragma once

// Exact rational dense and sparse linear algebra, with adjoints and
// pseudo-inverses taken relative to arbitrary (Gram) inner products.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "canonconn/errors.hpp"

namespace canonconn {

using Rat = mpq_class;
using Vec = std::vector<Rat>;

/// n/d in lowest terms (mpq_class(n, d) alone leaves the fraction unreduced).
inline Rat frac(long n, long d) {
  Rat r(n, d);
  r.canonicalize();
  return r;
}

/// Parses "p", "-p", "p/q" (surrounding whitespace allowed). Result is canonical.
Rat parse_rat(std::string_view text);
std::string to_string(const Rat& value);

Vec zero_vec(std::size_t n);
bool is_zero(std::span<const Rat> v);

/// Dense row-major rational matrix.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Mat(std::size_t rows, std::size_t cols, std::vector<Rat> entries);

  static Mat identity(std::size_t n);
  /// Row-major nested initializer, handy in tests: Mat::from_rows({{1, 2}, {3, 4}}).
  static Mat from_rows(const std::vector<std::vector<Rat>>& rows);
  static Mat from_columns(const std::vector<Vec>& cols, std::size_t rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Rat& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rat& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Rat> entries() const noexcept { return data_; }
  Vec row(std::size_t r) const;
  Vec col(std::size_t c) const;

  Mat transpose() const;
  bool is_zero() const;
  bool is_symmetric() const;

  Mat select(std::span<const std::size_t> row_idx, std::span<const std::size_t> col_idx) const;
  Mat select_cols(std::span<const std::size_t> col_idx) const;
  static Mat vstack(const std::vector<const Mat*>& blocks);
  static Mat hstack(const std::vector<const Mat*>& blocks);

  friend Mat operator*(const Mat& a, const Mat& b);
  friend Vec operator*(const Mat& a, std::span<const Rat> v);
  friend Mat operator+(const Mat& a, const Mat& b);
  friend Mat operator-(const Mat& a, const Mat& b);
  friend Mat operator*(const Rat& s, const Mat& a);
  friend bool operator==(const Mat& a, const Mat& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rat> data_;
};

Vec operator*(const Mat& a, const Vec& v);
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(const Rat& s, const Vec& v);

struct Rref {
  Mat reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

Rref rref(Mat m);

struct Decomposition {
  std::size_t rank = 0;
  Mat kernel_basis;  // cols x (cols - rank); columns span ker M
  Mat image_basis;   // rows x rank; pivot columns of M
};

Decomposition decompose(const Mat& m);
std::size_t rank(const Mat& m);

/// Some x with A x = b, or nullopt when the system is inconsistent.
std::optional<Vec> solve(const Mat& a, std::span<const Rat> b);
Mat inverse(const Mat& m);

/// Exact fraction-free LDL^T style test: all leading pivots positive.
bool is_positive_definite(const Mat& m);

/// A finite-dimensional inner product space given by its Gram matrix.
class IPSpace {
 public:
  IPSpace() = default;
  explicit IPSpace(Mat gram);
  static IPSpace standard(std::size_t n);

  std::size_t dim() const noexcept { return gram_.rows(); }
  const Mat& gram() const noexcept { return gram_; }
  Rat inner(std::span<const Rat> u, std::span<const Rat> v) const;

 private:
  Mat gram_;
};

/// M^* with <Mv, w>_cod = <v, M^* w>_dom, i.e. G_dom^{-1} M^T G_cod.
Mat gram_adjoint(const Mat& m, const IPSpace& dom, const IPSpace& cod);

/// Pseudo-inverse: zero on (im M)^perp, inverse of M restricted to (ker M)^perp.
Mat gram_pinv(const Mat& m, const IPSpace& dom, const IPSpace& cod);

/// Inner product on the codomain of a surjective L induced via its pseudo-inverse.
IPSpace induced_gram(const Mat& l, const IPSpace& dom);

/// Orthogonal projector (w.r.t. `space`) onto the column span of `basis`.
Mat orthogonal_projector(const Mat& basis, const IPSpace& space);

// ---------------------------------------------------------------------------
// Sparse matrices. The complex operators are very sparse and homogeneity
// preserving, so they live in CSR form; dense slices are extracted on demand.

class SpMat {
 public:
  using Entry = std::pair<std::size_t, Rat>;

  SpMat() = default;
  SpMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), row_data_(rows) {}

  static SpMat identity(std::size_t n);
  static SpMat from_dense(const Mat& m);
  /// kron(I_blocks, block): block-diagonal with `count` copies of `block`.
  static SpMat kron_identity(std::size_t count, const Mat& block);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const;

  /// Adds `value` at (r, c). Rows stay sorted after finalize().
  void add(std::size_t r, std::size_t c, const Rat& value);
  void finalize();

  const std::vector<Entry>& row(std::size_t r) const { return row_data_[r]; }
  Rat at(std::size_t r, std::size_t c) const;

  Mat to_dense() const;
  Mat dense_block(std::span<const std::size_t> row_idx, std::span<const std::size_t> col_idx) const;
  SpMat transpose() const;
  bool is_zero() const;

  friend SpMat operator*(const SpMat& a, const SpMat& b);
  friend Vec operator*(const SpMat& a, std::span<const Rat> v);
  friend SpMat operator+(const SpMat& a, const SpMat& b);
  friend SpMat operator-(const SpMat& a, const SpMat& b);
  friend SpMat operator*(const Rat& s, const SpMat& a);
  friend bool operator==(const SpMat& a, const SpMat& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::vector<Entry>> row_data_;
};

Vec operator*(const SpMat& a, const Vec& v);

/// Kronecker product; row (i, r) of the result is i * b.rows() + r.
SpMat kron(const SpMat& a, const SpMat& b);

}  // namespace canonconn
