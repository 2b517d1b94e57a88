#pragma once

// Polynomial frames on R^n: the graded frame and connection built from a
// horizontal frame and the connection coefficients mu on it, torsion and
// curvature at the base point, and the canonical (normalized) connection.
//
// Conventions. X_A is the frame field for the basis element b_A of g_-,
// omega(X_A) in g_0 with nabla_X X_B = X_{omega(X) b_B}.
//   T(X_A, X_B)  = X_{omega_A b_B} - X_{omega_B b_A} - [X_A, X_B]
//   T0(X_A, X_B) = -X_{[b_A, b_B]}
//   R(X_A, X_B)  = X_A omega_B - X_B omega_A + [omega_A, omega_B] - omega([X_A, X_B])
//   kappa(b_A, b_B) = (T - T0)(X_A, X_B) + R(X_A, X_B)   (frame and g_0 coordinates)

#include <cstddef>
#include <memory>
#include <vector>

#include "canonconn/carnot.hpp"
#include "canonconn/cochain.hpp"
#include "canonconn/jet.hpp"
#include "canonconn/normalize.hpp"
#include "canonconn/poly.hpp"

namespace canonconn {

struct FrameModel {
  std::size_t dim = 0;
  std::vector<PolyVec> fields;  // horizontal frame, orthonormal by declaration
  Vec point;
};

/// Cumulative ranks of the flag E^-1 c E^-2 c ... at the point; throws NotBracketGenerating.
std::vector<std::size_t> growth_vector(const FrameModel& model);

struct ReferenceFrame {
  std::vector<PolyVec> fields;  // X~_A for every basis element of g_-
  Mat at_point;                 // columns X~_A(p)
};

/// X~_B = sum c_ab [X~_a, X~_b] with c the pseudo-inverse of the bracket map,
/// layer by layer. Checks growth and the realized symbol at p (SymbolMismatch).
ReferenceFrame reference_frame(const CarnotAlgebra& alg, const FrameModel& model);

/// mu[a][sigma]: coefficient of the g_0 basis element sigma in omega(X_a), a horizontal.
using MuField = std::vector<std::vector<Jet>>;
MuField mu_from_polys(std::shared_ptr<const MonomialBasis> basis, const std::vector<std::vector<Poly>>& mu,
                      std::span<const Rat> point);
MuField zero_mu(std::shared_ptr<const MonomialBasis> basis, const ExtendedAlgebra& alg);

struct ConnectionJets {
  std::vector<JetVec> frame;             // X_A
  std::vector<std::vector<Jet>> omega;   // omega(X_A) in g_0 coordinates
};

/// The graded frame and connection determined by mu.
ConnectionJets extend_connection(const ExtendedAlgebra& alg, const FrameModel& model, const MuField& mu);

struct PointData {
  Mat frame;                    // columns X_A(p)
  Mat omega;                    // row A: omega(X_A)(p)
  std::vector<Vec> torsion;     // [A * n + B], frame coordinates
  std::vector<Vec> curvature;   // [A * n + B], g_0 coordinates
  Cochain kappa;                // element of C^2
};

PointData evaluate_at_point(const Complex& cx, const ConnectionJets& conn);

/// Ordered pairs A < B of {0..n-1}, the coordinates used for 2-forms below.
std::vector<std::pair<std::size_t, std::size_t>> two_form_pairs(std::size_t n);
/// Orthogonal projector onto the 2-forms alpha with cyclic alpha(T0(v1, v2), v3) = 0.
/// t0[A * n + B] holds T0(X_A, X_B); the inner product on 2-forms is induced by `gram`.
Mat jac_projector(const std::vector<Vec>& t0, const Mat& gram);
Vec jac_projection(const Vec& two_form, const std::vector<Vec>& t0, const Mat& gram);

/// T0(X_A, X_B) = -[b_A, b_B] for all A, B.
std::vector<Vec> t0_table(const CarnotAlgebra& alg);

/// R(chi(.)) = 0 and (T - T0)(chi(.)) = 0, with chi = -T0^+ from the gram at p;
/// <T_Jac(v, .), s> = 0 for horizontal v and s in iso; <T_Jac(v, .), T0(w, .)> = 0
/// for v one layer deeper than w.
Certificate certify_frame(const Complex& cx, const PointData& pt);

struct ConnectionReport {
  std::vector<std::size_t> growth;
  unsigned degree = 0;
  ReferenceFrame reference;
  MuField mu;
  PointData reference_point;
  PointData point;
  Cochain kappa_tilde_1;  // reference homogeneity-1 curvature at p
  Cochain alpha_1;        // at p
  Certificate cartan;     // normalize::certify on kappa(p)
  Certificate manifold;   // certify_frame
  Certificate consistency;
};

/// Degree cap: total degree of the Taylor expansions at p.
ConnectionReport solve_canonical(const Complex& cx, const FrameModel& model, unsigned degree = 6);

/// Frame, torsion and curvature for a prescribed mu (no normalization).
ConnectionReport analyze_connection(const Complex& cx, const FrameModel& model, const std::vector<std::vector<Poly>>& mu,
                                    unsigned degree = 6);
ConnectionReport analyze_connection(const Complex& cx, const FrameModel& model, const MuField& mu);

/// alpha_1 = S kappa_1(p) restricted to C^1_1 coordinates; zero for a normalized connection.
Vec alpha_1_at_point(const Complex& cx, const PointData& pt);

}  // namespace canonconn
