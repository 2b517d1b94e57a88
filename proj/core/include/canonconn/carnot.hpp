#pragma once

// Carnot algebras: graded nilpotent Lie algebras with an inner product on the
// first layer, their induced inner products, isometry algebra and the
// extension g = g_- + g_0.

#include <cstddef>
#include <string>
#include <vector>

#include "canonconn/exactla.hpp"

namespace canonconn {

struct BracketEntry {
  std::size_t left = 0;   // global basis index
  std::size_t right = 0;
  Vec result;             // coefficients over the g_- basis
};

struct CarnotSpec {
  std::size_t step = 0;
  std::vector<std::size_t> layer_dims;  // n_1, ..., n_step
  std::vector<BracketEntry> brackets;
  Mat gram_minus1;
  std::vector<std::string> labels;      // optional; defaults to b1..bn
};

class CarnotAlgebra {
 public:
  /// Validates and builds. Throws Error with the matching kind on failure.
  static CarnotAlgebra build(const CarnotSpec& spec);

  const CarnotSpec& spec() const noexcept { return spec_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t step() const noexcept { return spec_.step; }
  std::size_t layer_dim(std::size_t layer) const { return spec_.layer_dims.at(layer - 1); }
  /// First global index of a layer (1-based layer number).
  std::size_t layer_offset(std::size_t layer) const { return offsets_.at(layer - 1); }
  /// Layer number (1..step) of a basis element.
  std::size_t layer_of(std::size_t i) const { return layer_of_.at(i); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

  /// [b_i, b_j] over the g_- basis.
  const Vec& bracket(std::size_t i, std::size_t j) const { return consts_[i * dim_ + j]; }
  Vec bracket(const Vec& u, const Vec& v) const;

  /// Full block-diagonal inner product on g_-.
  const IPSpace& gram() const noexcept { return gram_; }

  /// Bracket map (wedge^2 g_-)_{-j} -> g_{-j} and the wedge pairs indexing its columns.
  Mat wedge_bracket_map(std::size_t layer, std::vector<std::pair<std::size_t, std::size_t>>* pairs = nullptr) const;

 private:
  CarnotSpec spec_;
  std::size_t dim_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> layer_of_;
  std::vector<std::string> labels_;
  std::vector<Vec> consts_;
  IPSpace gram_;
};

/// Inner products on all layers induced from the first one; same as CarnotAlgebra::gram().
IPSpace induced_inner_products(const CarnotAlgebra& alg);

/// Gram-determinant pairing of a ^ b with c ^ d.
Rat wedge_pair(const Mat& gram, std::size_t a, std::size_t b, std::size_t c, std::size_t d);

/// Basis of degree-zero derivations that are skew on g_{-1}; each is an n x n
/// matrix with column a holding the image of b_a.
std::vector<Mat> isometry_algebra(const CarnotAlgebra& alg);

class ExtendedAlgebra {
 public:
  static ExtendedAlgebra extend(const CarnotAlgebra& alg, std::vector<Mat> g0_basis);
  static ExtendedAlgebra extend(const CarnotAlgebra& alg) { return extend(alg, isometry_algebra(alg)); }

  const CarnotAlgebra& minus() const noexcept { return minus_; }
  const std::vector<Mat>& g0_basis() const noexcept { return g0_; }
  std::size_t dim_minus() const noexcept { return minus_.dim(); }
  std::size_t dim_g0() const noexcept { return g0_.size(); }
  std::size_t dim() const noexcept { return minus_.dim() + g0_.size(); }

  /// Degree of a g basis element: -layer on g_-, 0 on g_0.
  int degree(std::size_t a) const;

  const Vec& bracket(std::size_t a, std::size_t b) const { return consts_[a * dim() + b]; }
  Vec bracket(const Vec& u, const Vec& v) const;
  /// ad(b_m) restricted to acting on g: column a is [b_m, e_a].
  const Mat& ad(std::size_t m) const { return ad_[m]; }

  /// Inner product on g: block diagonal with g_- and g_0 blocks.
  const IPSpace& gram() const noexcept { return gram_; }
  const IPSpace& gram_g0() const noexcept { return gram_g0_; }

  /// Coordinates of a degree-0 derivation matrix in the g_0 basis; throws if outside.
  Vec g0_coords(const Mat& derivation) const;
  /// The n x n matrix of a g_0 element given in coordinates.
  Mat g0_matrix(std::span<const Rat> coords) const;

 private:
  CarnotAlgebra minus_;
  std::vector<Mat> g0_;
  std::vector<Vec> consts_;
  std::vector<Mat> ad_;
  IPSpace gram_;
  IPSpace gram_g0_;
  Mat g0_flat_;        // n^2 x m, columns are flattened basis matrices
  Mat g0_left_inv_;    // m x n^2
};

/// Frobenius pairing tr(S^T G T G^{-1}) of two endomorphisms of g_-.
Rat frobenius_pair(const Mat& s, const Mat& t, const Mat& gram, const Mat& gram_inv);

}  // namespace canonconn
