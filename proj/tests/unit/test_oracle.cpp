#include <doctest.h>

#include <map>

#include "canonconn/oracle.hpp"
#include "data.hpp"
#include "fixtures.hpp"
#include "random_cochain.hpp"

using namespace canonconn;
using testing_util::load_frame;
using testing_util::make_complex;

namespace {

std::map<std::string, Rat> structure(const OracleReport& o) {
  std::map<std::string, Rat> s;
  for (const auto& nv : o.structure) s[nv.name] = nv.value;
  return s;
}

bool parallel(const Vec& a, const Vec& b) {
  return !is_zero(a) && !is_zero(b) && rank(Mat::from_columns({a, b}, a.size())) == 1;
}

// Residuals of the four free step-two normalization conditions, each counted as
// (failing, total), for mu and nu^(2) values read from the oracle report.
struct FreeConditions {
  int fail[4] = {0, 0, 0, 0}, total[4] = {0, 0, 0, 0};
  bool n24_solvable = false;
};

FreeConditions free_conditions(const std::map<std::string, Rat>& s, int n) {
  auto nm = [](int i, int j, int k) { return std::to_string(i + 1) + std::to_string(j + 1) + ";" + std::to_string(k + 1); };
  auto v2 = [&](int i, int j, int k) { return s.at("nu2_" + nm(i, j, k)); };
  // unknown index of mu_{ij;k}, i < j
  std::map<std::tuple<int, int, int>, std::size_t> idx;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k) idx[{i, j, k}] = idx.size();
  auto mu = [&](int i, int j, int k) -> Rat {
    if (i == j) return 0;
    return i < j ? s.at("mu_" + nm(i, j, k)) : Rat(-s.at("mu_" + nm(j, i, k)));
  };
  // linear form in the unknowns: coefficient vector plus constant
  using Lin = std::pair<Vec, Rat>;
  auto unk = [&](int i, int j, int k) {
    Lin l{Vec(idx.size()), 0};
    if (i != j) l.first[idx.at({std::min(i, j), std::max(i, j), k})] = i < j ? 1 : -1;
    return l;
  };
  auto add = [](Lin a, const Lin& b, Rat s) {
    for (std::size_t t = 0; t < a.first.size(); ++t) a.first[t] += s * b.first[t];
    a.second += s * b.second;
    return a;
  };
  auto value = [&](const Lin& l) {
    Rat v = l.second;
    for (const auto& [key, t] : idx) v += l.first[t] * mu(std::get<0>(key), std::get<1>(key), std::get<2>(key));
    return v;
  };
  std::vector<Lin> n24;
  FreeConditions out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Lin sr{Vec(idx.size()), 0};
      for (int r = 0; r < n; ++r) sr = add(sr, unk(r, i, r), 1);
      Lin n1 = add(sr, unk(i, j, j), n);
      n1.second += -v2(i, j, j) + v2(j, i, j);
      Lin n3 = add(sr, unk(i, j, j), 2 * n - 3);
      n3.second += v2(j, i, j) - v2(j, j, i);
      ++out.total[0], ++out.total[2];
      out.fail[0] += value(n1) != 0;
      out.fail[2] += value(n3) != 0;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        Lin n2 = add(add(Lin{Vec(idx.size()), 0}, unk(k, i, j), -n), unk(k, j, i), n);
        n2.second += -v2(i, j, k) + v2(j, i, k);
        Lin n4 = add(add(add(Lin{Vec(idx.size()), 0}, unk(i, j, k), 2 * (n - 1)), unk(j, k, i), 1), unk(i, k, j), -1);
        n4.second += v2(k, i, j) - v2(k, j, i);
        ++out.total[1], ++out.total[3];
        out.fail[1] += value(n2) != 0;
        out.fail[3] += value(n4) != 0;
        n24.push_back(n2);
        n24.push_back(n4);
      }
    }
  Mat a(n24.size(), idx.size());
  Vec b(n24.size());
  for (std::size_t r = 0; r < n24.size(); ++r) {
    for (std::size_t c = 0; c < idx.size(); ++c) a(r, c) = n24[r].first[c];
    b[r] = -n24[r].second;
  }
  out.n24_solvable = solve(a, b).has_value();
  return out;
}

}  // namespace

TEST_CASE("heis23 closed form equals the solver") {
  for (auto name : {"heis_model", "heis_perturbed", "heis_perturbed2"}) {
    CAPTURE(name);
    auto ff = load_frame(name);
    auto cx = make_complex(ff.symbol);
    auto o = closed_form_oracle(cx, "heis23", ff.model);
    auto r = solve_canonical(cx, ff.model);
    CHECK(compare_connections(r.point, o.connection.point).all_pass());
    CHECK(reeb_check(cx, ff.model, r.mu).all_pass());
    CHECK(o.connection.cartan.all_pass());
    CHECK(o.connection.manifold.all_pass());
  }
  auto s = structure(closed_form_oracle(make_complex(fixtures::heisenberg23()), "heis23", load_frame("heis_perturbed").model));
  CHECK(s.at("f1") == 0);
  CHECK(s.at("f2") == 1);
  CHECK(s.at("alpha1") == 1);
  CHECK(s.at("alpha2") == 0);
  auto s2 = structure(closed_form_oracle(make_complex(fixtures::heisenberg23()), "heis23", load_frame("heis_perturbed2").model));
  CHECK(s2.at("f2") == frac(-24, 7));
  auto s0 = structure(closed_form_oracle(make_complex(fixtures::heisenberg23()), "heis23", load_frame("heis_model").model));
  CHECK(s0.at("f1") == 0);
  CHECK(s0.at("f2") == 0);
}

TEST_CASE("rolling235 closed form") {
  auto cx = make_complex(fixtures::rolling235());
  SUBCASE("nilpotent model: all f vanish and the solver agrees") {
    auto ff = load_frame("rolling_nilpotent");
    auto o = closed_form_oracle(cx, "rolling235", ff.model);
    for (const auto& nv : o.structure) CHECK(nv.value == 0);
    auto r = solve_canonical(cx, ff.model);
    CHECK(compare_connections(r.point, o.connection.point).all_pass());
  }
  SUBCASE("perturbed model: eta from f, normalization not attainable") {
    auto ff = load_frame("rolling_model");
    auto o = closed_form_oracle(cx, "rolling235", ff.model);
    auto s = structure(o);
    CHECK(s.at("f12") == frac(-1, 4));
    CHECK(s.at("f22") == frac(-1, 3));
    CHECK(s.at("eta1") == s.at("f22"));
    CHECK(s.at("eta2") == -s.at("f11"));
    CHECK(o.connection.manifold.at("chi_torsion").pass);
    CHECK(o.connection.manifold.at("chi_curvature").pass);
    CHECK(o.connection.cartan.at("extension").pass);
    CHECK_FALSE(o.connection.cartan.at("normalization").pass);
    CHECK_THROWS_AS(solve_canonical(cx, ff.model), Error);
  }
}

TEST_CASE("free step-two closed form") {
  SUBCASE("nilpotent models agree with the solver") {
    for (auto name : {"free2_n3_nilpotent", "free2_n4_nilpotent"}) {
      CAPTURE(name);
      auto ff = load_frame(name);
      auto cx = make_complex(ff.symbol);
      auto o = closed_form_oracle(cx, "free_step2", ff.model);
      auto r = solve_canonical(cx, ff.model);
      CHECK(compare_connections(r.point, o.connection.point).all_pass());
      auto c = free_conditions(structure(o), static_cast<int>(ff.symbol.layer_dims[0]));
      for (int q = 0; q < 4; ++q) CHECK(c.fail[q] == 0);
    }
  }
  SUBCASE("closed-form conditions on perturbed models") {
    auto o3 = load_frame("free2_n3_model");
    auto c3 = free_conditions(structure(closed_form_oracle(make_complex(o3.symbol), "free_step2", o3.model)), 3);
    CHECK_FALSE(c3.n24_solvable);
    CHECK(c3.fail[1] == 6);
    CHECK(c3.fail[3] == 6);

    auto o0 = load_frame("free2_n3_model_origin");
    auto c0 = free_conditions(structure(closed_form_oracle(make_complex(o0.symbol), "free_step2", o0.model)), 3);
    CHECK(c0.n24_solvable);
    CHECK(c0.fail[1] == 0);  // three-index formula
    CHECK(c0.fail[3] == 0);
    CHECK(c0.fail[0] == 4);  // n1 = 3 case values miss the first and third conditions
    CHECK(c0.fail[2] == 3);

    auto o4 = load_frame("free2_n4_model");
    auto c4 = free_conditions(structure(closed_form_oracle(make_complex(o4.symbol), "free_step2", o4.model)), 4);
    CHECK_FALSE(c4.n24_solvable);
  }
}

TEST_CASE("contact models") {
  SUBCASE("standard symbol: closed form, conditions, Reeb line") {
    auto ff = load_frame("contact_std_model");
    auto cx = make_complex(ff.symbol);
    auto o = closed_form_oracle(cx, "contact_std", ff.model);
    CHECK(o.checks.at("grading_is_reeb").pass);
    auto r = solve_canonical(cx, ff.model);
    CHECK(compare_connections(r.point, o.connection.point).all_pass());
    CHECK(contact_conditions(cx, r.point).all_pass());
    CHECK(r.cartan.all_pass());
    CHECK(r.manifold.all_pass());
    auto frozen = testing_util::load_json(testing_util::oracle_path("contact_std_reeb.json"));
    Vec reeb = reeb_field_at_point(cx.algebra().minus(), ff.model);
    CHECK(reeb == testing_util::rat_vec(frozen["reeb"]));
    CHECK(parallel(r.point.frame.col(4), reeb));
  }
  SUBCASE("two eigenvalues: solved grading against both Upsilon values") {
    auto ff = load_frame("contact_two_eigen_model");
    auto cx = make_complex(ff.symbol);
    auto r = solve_canonical(cx, ff.model);
    CHECK(r.cartan.all_pass());
    CHECK(r.manifold.all_pass());
    CHECK(contact_conditions(cx, r.point).all_pass());
    auto frozen = testing_util::load_json(testing_util::oracle_path("contact_two_eigen_upsilon.json"));
    CHECK(reeb_field_at_point(cx.algebra().minus(), ff.model) == testing_util::rat_vec(frozen["reeb"]));
    Vec z = r.point.frame.col(4);
    CHECK(z == Vec{0, 0, 0, 0, frac(25, 36)});
    CHECK(parallel(z, testing_util::rat_vec(frozen["grading_direct"])));
    CHECK_FALSE(parallel(z, testing_util::rat_vec(frozen["grading"])));
    try {
      closed_form_oracle(cx, "contact_std", ff.model);
      FAIL("expected UnsupportedModel");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::UnsupportedModel);
    }
  }
}

TEST_CASE("oracle guards") {
  auto ff = load_frame("heis_model");
  auto cx = make_complex(ff.symbol);
  CHECK_THROWS_AS(closed_form_oracle(cx, "rolling235", ff.model), Error);
  CHECK_THROWS_AS(closed_form_oracle(cx, "nonsense", ff.model), Error);
  auto roll = load_frame("rolling_nilpotent");
  CHECK_THROWS_AS(reeb_field_at_point(CarnotAlgebra::build(roll.symbol), roll.model), Error);
}
