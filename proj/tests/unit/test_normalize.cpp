#include <doctest.h>

#include "canonconn/normalize.hpp"
#include "fixtures.hpp"
#include "random_cochain.hpp"

using namespace canonconn;
using testing_util::make_complex;
using testing_util::random_cochain;

namespace {

Cochain from_slice(const Complex& cx, const Normalizer& nz, const Vec& coords) {
  Cochain c = zero_cochain(cx, 2);
  for (std::size_t i = 0; i < coords.size(); ++i) c.coeffs[nz.inputs()[i]] = coords[i];
  return c;
}

Rat at(const Complex& cx, const Cochain& x, std::vector<std::size_t> args, std::size_t comp) {
  return evaluate(cx, x, args)[comp];
}

}  // namespace

TEST_CASE("zero input gives zero") {
  for (auto& [name, spec] : fixtures::all()) {
    CAPTURE(name);
    auto cx = make_complex(spec);
    Normalizer nz(cx);
    auto sol = nz.solve_alpha1(zero_cochain(cx, 2));
    CHECK(is_zero(sol.alpha_1.coeffs));
    CHECK(is_zero(sol.kappa_1.coeffs));
    CHECK(sol.kernel_dim == 0);
    CHECK(nz.check_bianchi_deg1(zero_cochain(cx, 2)));
    CHECK(certify(cx, zero_cochain(cx, 2)).all_pass());
    CHECK(corollary_form_check(cx, zero_cochain(cx, 2)));
  }
}

TEST_CASE("heisenberg: kappa_1 vanishes for every realizable input") {
  auto cx = make_complex(fixtures::heisenberg23());
  Normalizer nz(cx);
  Mat basis = nz.valid_inputs();
  CHECK(basis.cols() == nz.inputs().size());
  CHECK(nz.inputs().size() == 4);
  for (std::size_t c = 0; c < basis.cols(); ++c) {
    auto sol = nz.solve_alpha1(from_slice(cx, nz, basis.col(c)));
    CHECK(is_zero(sol.kappa_1.coeffs));
    CHECK(sol.kappa_1.coeffs == (cx.d(1) * sol.alpha_1.coeffs + from_slice(cx, nz, basis.col(c)).coeffs));
  }
  // B (x) A1*^A2* has homogeneity 0; d of it is just reported
  Cochain b12 = basis_cochain(cx, 2, {0, 1});
  CHECK(nz.check_bianchi_deg1(b12));
  CHECK_THROWS_AS(nz.solve_alpha1(b12), Error);
}

TEST_CASE("rolling: solution against the closed-form alpha_1") {
  auto cx = make_complex(fixtures::rolling235());
  Normalizer nz(cx);
  constexpr std::size_t A1 = 0, A2 = 1, B = 2, C1 = 3, C2 = 4, S = 5;
  const std::size_t a[2] = {A1, A2}, c[2] = {C1, C2};
  Mat basis = nz.valid_inputs();
  REQUIRE(basis.cols() == 8);
  std::size_t c_line_mismatch = 0;
  for (std::size_t col = 0; col < basis.cols(); ++col) {
    Cochain kt = from_slice(cx, nz, basis.col(col));
    auto sol = nz.solve_alpha1(kt);
    const Cochain& al = sol.alpha_1;
    const Cochain& k1 = sol.kappa_1;
    Rat ac[2];
    for (int j = 0; j < 2; ++j) {
      ac[j] = at(cx, al, {c[j]}, B);
      if (ac[j] != -at(cx, kt, {a[j], c[j]}, c[j])) ++c_line_mismatch;
    }
    // alpha_1(B) and alpha_1(A_j) lines, with kappa~_1(A_j, B) in place of kappa~_1(A_j, C_j)
    Rat b1 = -(ac[1] - at(cx, kt, {A2, B}, B));
    Rat b2 = ac[0] - at(cx, kt, {A1, B}, B);
    CHECK(at(cx, al, {B}, A1) == b1);
    CHECK(at(cx, al, {B}, A2) == b2);
    CHECK(at(cx, al, {A1}, S) == -b1 + at(cx, kt, {A1, A2}, A1));
    CHECK(at(cx, al, {A2}, S) == -b2 + at(cx, kt, {A1, A2}, A2));
    // hand-derived Pi d C^1_1: the C_j components of kappa(A_a, C_c) enter with cross terms
    auto K = [&](std::size_t i, std::size_t j, std::size_t d) { return at(cx, k1, {a[i], c[j]}, c[d]); };
    Rat h = frac(1, 2);
    CHECK(K(0, 0, 0) + h * (K(0, 1, 1) + K(1, 0, 1)) == 0);
    CHECK(h * (K(0, 1, 0) + K(1, 0, 0)) + K(1, 1, 1) == 0);
    CHECK(-h * (K(0, 1, 0) + K(1, 0, 0)) + K(0, 0, 1) == 0);
    CHECK(-K(1, 1, 0) + h * (K(0, 1, 1) + K(1, 0, 1)) == 0);
    CHECK(is_zero(evaluate(cx, k1, std::vector<std::size_t>{A1, A2})));
    CHECK(is_zero(evaluate(cx, k1, std::vector<std::size_t>{A1, B})));
    CHECK(is_zero(evaluate(cx, k1, std::vector<std::size_t>{A2, B})));
  }
  // the closed-form alpha_1(C_j) line keeps only <C_j, kappa(A_j, C_j)> and misses the cross terms
  CHECK(c_line_mismatch > 0);
}

TEST_CASE("gauge independence and certificates") {
  std::mt19937 rng(21);
  for (auto& [name, spec] : fixtures::all()) {
    CAPTURE(name);
    auto cx = make_complex(spec);
    Normalizer nz(cx);
    Mat basis = nz.valid_inputs();
    for (int trial = 0; trial < 5; ++trial) {
      Vec coords(basis.rows());
      for (std::size_t col = 0; col < basis.cols(); ++col) {
        Rat w = testing_util::random_rat(rng);
        for (std::size_t r = 0; r < basis.rows(); ++r) coords[r] += w * basis(r, col);
      }
      Cochain kt = from_slice(cx, nz, coords);
      auto sol = nz.solve_alpha1(kt);
      Vec a1;
      for (auto i : nz.unknowns()) a1.push_back(sol.alpha_1.coeffs[i]);
      CHECK(a1 == nz.solution_operator() * coords);
      auto cert = certify(cx, sol.kappa_1);
      CHECK(cert.all_pass());
      CHECK(corollary_form_check(cx, sol.kappa_1));
      Cochain delta = random_cochain(rng, cx, 1, 1);
      Cochain shifted = {2, kt.coeffs + cx.d(1) * delta.coeffs};
      auto sol2 = nz.solve_alpha1(shifted);
      CHECK(sol2.kappa_1.coeffs == sol.kappa_1.coeffs);
      CHECK(sol2.alpha_1.coeffs == (sol.alpha_1.coeffs - delta.coeffs));
    }
  }
}

TEST_CASE("corollary form agrees with the normalization condition") {
  std::mt19937 rng(4);
  for (auto& [name, spec] : fixtures::all()) {
    if (name == "free_step2_n4") continue;
    CAPTURE(name);
    auto cx = make_complex(spec);
    for (int trial = 0; trial < 10; ++trial) {
      // random kappa_1 satisfying the extension condition
      Cochain k = random_cochain(rng, cx, 2, 1);
      Cochain k1 = {2, k.coeffs - cx.db(1) * (cx.db_inv(1) * k.coeffs)};
      REQUIRE(is_zero(cx.db_inv(1) * k1.coeffs));
      bool normalized = certify(cx, k1).at("normalization").pass;
      CHECK(corollary_form_check(cx, k1) == normalized);
    }
  }
}

TEST_CASE("inconsistent inputs and certificate failures") {
  std::size_t found = 0;
  for (auto& [name, spec] : fixtures::all()) {
    CAPTURE(name);
    auto cx = make_complex(spec);
    Normalizer nz(cx);
    for (auto i : nz.inputs()) {
      Cochain e = zero_cochain(cx, 2);
      e.coeffs[i] = 1;
      if (!nz.check_bianchi_deg1(e)) {
        ++found;
        try {
          nz.solve_alpha1(e);
          FAIL("expected Inconsistent");
        } catch (const Error& err) {
          CHECK(err.kind() == ErrorKind::Inconsistent);
        }
        break;
      }
    }
    Cochain low = basis_cochain(cx, cx.n() - 1, {0, 1});  // value in the deepest layer
    auto cert = certify(cx, low);
    CHECK_FALSE(cert.at("positive_homogeneity").pass);
  }
  CHECK(found > 0);
}
