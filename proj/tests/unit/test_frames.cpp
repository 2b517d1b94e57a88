#include <doctest.h>

#include <random>

#include "canonconn/frames.hpp"
#include "data.hpp"
#include "fixtures.hpp"
#include "random_cochain.hpp"
#include "random_mu.hpp"

using namespace canonconn;
using testing_util::load_frame;
using testing_util::make_complex;
using testing_util::random_mu;
using testing_util::random_poly;

namespace {

PolyVec field(std::vector<std::string> comps) {
  PolyVec v;
  for (auto& c : comps) v.push_back(parse_poly(c, comps.size()));
  return v;
}

// beta(u, X_w) for a scalar 2-form over two_form_pairs
Rat pair_eval(const Vec& beta, const Vec& u, std::size_t w, std::size_t n) {
  Rat s = 0;
  std::size_t k = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b, ++k) {
      if (b == w) s += u[a] * beta[k];
      if (a == w) s -= u[b] * beta[k];
    }
  return s;
}

}  // namespace

TEST_CASE("polynomials: parse, print, arithmetic") {
  Poly p = parse_poly("1/2*x1^2*x3 - x2 + 3", 3);
  CHECK(to_string(p) == "1/2*x1^2*x3 - x2 + 3");
  CHECK(parse_poly(" 3 -x2+ 1/2 * x3*x1^2 ", 3) == p);
  CHECK(p.degree() == 3);
  Vec pt = {Rat(2), Rat(1), frac(1, 3)};
  CHECK(p.evaluate(pt) == frac(8, 3));
  CHECK(p.derivative(0) == parse_poly("x1*x3", 3));
  CHECK((p - p).is_zero());
  CHECK(parse_poly("x1 + x2", 2) * parse_poly("x1 - x2", 2) == parse_poly("x1^2 - x2^2", 2));
  CHECK_THROWS_AS(parse_poly("x4", 3), Error);
  CHECK_THROWS_AS(parse_poly("2 * * x1", 3), Error);
  CHECK_THROWS_AS(parse_poly("(x1 + 1)", 3), Error);
}

TEST_CASE("brackets of polynomial fields") {
  CHECK(bracket(field({"1", "0"}), field({"0", "1"})) == field({"0", "0"}));
  PolyVec x1 = field({"1", "0", "-1/2*x2"}), x2 = field({"0", "1", "1/2*x1"});
  CHECK(bracket(x1, x2) == field({"0", "0", "1"}));
  std::mt19937 rng(3);
  for (int t = 0; t < 10; ++t) {
    PolyVec x, y;
    for (int i = 0; i < 3; ++i) {
      x.push_back(random_poly(rng, 3, 3, 4));
      y.push_back(random_poly(rng, 3, 3, 4));
    }
    for (auto& c : bracket(x, x)) CHECK(c.is_zero());
    CHECK(bracket(x, y) == Rat(-1) * bracket(y, x));
  }
}

TEST_CASE("jets agree with polynomial arithmetic") {
  auto b = MonomialBasis::get(3, 4);
  Vec p = {frac(1, 2), Rat(-1), Rat(2)};
  std::mt19937 rng(5);
  for (int t = 0; t < 20; ++t) {
    Poly f = random_poly(rng, 3, 2, 4), g = random_poly(rng, 3, 2, 4);
    Jet jf = Jet::from_poly(b, f, p), jg = Jet::from_poly(b, g, p);
    CHECK(jf.value() == f.evaluate(p));
    Jet prod = jf * jg;
    Jet ref = Jet::from_poly(b, f * g, p);
    CHECK(prod.order() == 4);
    for (std::size_t i = 0; i < b->size(); ++i) CHECK(prod.coeff(i) == ref.coeff(i));
    Jet sum = jf + jg - Jet::from_poly(b, f + g, p);
    CHECK(sum.is_zero());
    Jet d = jf.derivative(1);
    CHECK(d.order() == 3);
    CHECK(d.value() == f.derivative(1).evaluate(p));
  }
  // 1 / (1 + x1) at x1 = 1/2: coefficients (-2/3)^k * 2/3
  JetMat m{1, {Jet::from_poly(b, parse_poly("1 + x1", 3), p)}};
  Jet inv = inverse(m)(0, 0);
  Rat c = frac(2, 3);
  for (unsigned k = 0; k <= 4; ++k, c *= frac(-2, 3)) CHECK(inv.coeff(b->index_of({k, 0, 0})) == c);
  Jet j = Jet::from_poly(b, parse_poly("x1^3", 3), p);
  for (int k = 0; k < 5; ++k) j = j.derivative(0);
  CHECK_THROWS_AS(j.value(), Error);
}

TEST_CASE("growth vectors") {
  using V = std::vector<std::size_t>;
  CHECK(growth_vector(load_frame("heis_model").model) == V{2, 3});
  CHECK(growth_vector(load_frame("heis_perturbed").model) == V{2, 3});
  CHECK(growth_vector(load_frame("rolling_model").model) == V{2, 3, 5});
  CHECK(growth_vector(load_frame("free2_n3_model").model) == V{3, 6});
  CHECK(growth_vector(load_frame("free2_n4_model").model) == V{4, 10});
  CHECK(growth_vector(load_frame("contact_std_model").model) == V{4, 5});
  try {
    growth_vector(load_frame("underfull_frame").model);
    FAIL("expected NotBracketGenerating");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotBracketGenerating);
  }
}

TEST_CASE("realized symbol must match the declared one") {
  auto two = load_frame("contact_two_eigen_model");
  auto alg = CarnotAlgebra::build(fixtures::contact_std());
  try {
    reference_frame(alg, two.model);
    FAIL("expected SymbolMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SymbolMismatch);
  }
  CHECK_NOTHROW(reference_frame(CarnotAlgebra::build(two.symbol), two.model));
  // wrong step
  auto roll = load_frame("rolling_model");
  CHECK_THROWS_AS(reference_frame(CarnotAlgebra::build(fixtures::heisenberg23()), roll.model), Error);
}

TEST_CASE("extension with mu = 0") {
  SUBCASE("left-invariant heisenberg: Z = dz, flat, T = T0") {
    auto ff = load_frame("heis_model");
    auto cx = make_complex(ff.symbol);
    auto rep = analyze_connection(cx, ff.model, zero_mu(MonomialBasis::get(3, 6), cx.algebra()));
    CHECK(rep.point.frame.col(2) == Vec{0, 0, 1});
    CHECK(rep.point.omega.is_zero());
    auto t0 = t0_table(cx.algebra().minus());
    for (std::size_t i = 0; i < 9; ++i) {
      CHECK(rep.point.torsion[i] == t0[i]);
      CHECK(is_zero(rep.point.curvature[i]));
    }
    CHECK(rep.manifold.all_pass());
  }
  SUBCASE("perturbed heisenberg at the origin: grading field (1 + y) dz") {
    auto ff = load_frame("heis_perturbed");
    auto cx = make_complex(ff.symbol);
    auto rep = analyze_connection(cx, ff.model, zero_mu(MonomialBasis::get(3, 6), cx.algebra()));
    CHECK(rep.point.frame.col(2) == Vec{0, 0, 1});
    CHECK(rep.manifold.at("chi_torsion").pass);
    CHECK(rep.manifold.at("chi_curvature").pass);
  }
}

TEST_CASE("extension conditions hold for random mu") {
  std::mt19937 rng(11);
  for (std::string name : {"heis_perturbed2", "rolling_model", "free2_n3_model", "contact_std_model", "contact_two_eigen_model"}) {
    CAPTURE(name);
    auto ff = load_frame(name);
    auto cx = make_complex(ff.symbol);
    const auto& minus = cx.algebra().minus();
    const std::size_t n = minus.dim(), n1 = minus.layer_dim(1);
    auto t0 = t0_table(minus);
    for (int t = 0; t < 2; ++t) {
      auto rep = analyze_connection(cx, ff.model, random_mu(rng, cx.algebra(), ff.model), 4);
      CHECK(rep.manifold.at("chi_torsion").pass);
      CHECK(rep.manifold.at("chi_curvature").pass);
      // degree-1 horizontal torsion vanishes on all horizontal pairs only when T0 is
      // injective there; on contact symbols only its chi image is forced to vanish
      if (cx.algebra().minus().step() == 2 && minus.layer_dim(2) < n1 * (n1 - 1) / 2) continue;
      for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n1; ++j) {
          Vec d = rep.point.torsion[i * n + j] - t0[i * n + j];
          for (std::size_t a = 0; a < n1; ++a) CHECK(d[a] == 0);
        }
    }
  }
}

TEST_CASE("T_Jac projector") {
  std::mt19937 rng(17);
  SUBCASE("step one: identity") {
    std::vector<Vec> t0(9, Vec(3));
    CHECK(jac_projector(t0, Mat::identity(3)) == Mat::identity(3));
  }
  for (auto spec : {fixtures::heisenberg23(), fixtures::rolling235(), fixtures::free_step2(3), fixtures::contact_two_eigen()}) {
    auto alg = CarnotAlgebra::build(spec);
    const std::size_t n = alg.dim();
    auto t0 = t0_table(alg);
    Mat p = jac_projector(t0, alg.gram().gram());
    CHECK(p * p == p);
    for (int t = 0; t < 5; ++t) {
      Vec a(two_form_pairs(n).size());
      for (auto& x : a) x = testing_util::random_rat(rng);
      Vec b = jac_projection(a, t0, alg.gram().gram());
      CHECK(p * b == b);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          for (std::size_t k = j + 1; k < n; ++k)
            CHECK(pair_eval(b, t0[i * n + j], k, n) + pair_eval(b, t0[j * n + k], i, n) +
                      pair_eval(b, t0[k * n + i], j, n) ==
                  0);
    }
  }
  // rolling: the constraint is not vacuous
  auto roll = CarnotAlgebra::build(fixtures::rolling235());
  CHECK_FALSE(jac_projector(t0_table(roll), roll.gram().gram()) == Mat::identity(10));
}

TEST_CASE("canonical connection on the heisenberg models") {
  SUBCASE("left-invariant") {
    auto ff = load_frame("heis_model");
    auto cx = make_complex(ff.symbol);
    auto rep = solve_canonical(cx, ff.model);
    CHECK(rep.point.frame.col(2) == Vec{0, 0, 1});
    CHECK(rep.point.omega.is_zero());
    CHECK(rep.cartan.all_pass());
    CHECK(rep.manifold.all_pass());
    CHECK(rep.consistency.all_pass());
  }
  SUBCASE("X1 = dx, X2 = dy + x(1 + y) dz at the origin") {
    auto ff = load_frame("heis_perturbed");
    auto cx = make_complex(ff.symbol);
    auto rep = solve_canonical(cx, ff.model);
    CHECK(rep.point.frame.col(2) == Vec{1, 0, 1});  // Z = dx + dz
    CHECK(rep.point.omega.col(0) == Vec{1, 0, 2});
    CHECK(rep.mu[0][0].value() == 1);
    CHECK(rep.mu[1][0].value() == 0);
    CHECK(rep.cartan.all_pass());
    CHECK(rep.manifold.all_pass());
    CHECK(rep.consistency.all_pass());
  }
}

TEST_CASE("normalization is inconsistent on generic rolling and free models") {
  for (auto name : {"rolling_model", "free2_n3_model", "free2_n3_model_origin"}) {
    CAPTURE(name);
    auto ff = load_frame(name);
    auto cx = make_complex(ff.symbol);
    try {
      solve_canonical(cx, ff.model);
      FAIL("expected Inconsistent");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Inconsistent);
    }
  }
  for (auto name : {"rolling_nilpotent", "free2_n3_nilpotent"}) {
    CAPTURE(name);
    auto ff = load_frame(name);
    auto cx = make_complex(ff.symbol);
    auto rep = solve_canonical(cx, ff.model);
    CHECK(rep.cartan.all_pass());
    CHECK(rep.manifold.all_pass());
    CHECK(rep.consistency.all_pass());
  }
}
