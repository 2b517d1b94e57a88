#include <doctest.h>

#include <random>

#include "canonconn/exactla.hpp"

using namespace canonconn;

namespace {

Mat random_mat(std::mt19937& rng, std::size_t r, std::size_t c, int lo = -3, int hi = 3) {
  std::uniform_int_distribution<int> num(lo, hi), den(1, 3);
  Mat m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = frac(num(rng), den(rng));
  return m;
}

// Random SPD gram as A^T A + I.
IPSpace random_space(std::mt19937& rng, std::size_t n) {
  Mat a = random_mat(rng, n, n);
  return IPSpace(a.transpose() * a + Mat::identity(n));
}

// Low-rank random matrix: product of r x k and k x c.
Mat random_low_rank(std::mt19937& rng, std::size_t r, std::size_t c, std::size_t k) {
  return random_mat(rng, r, k) * random_mat(rng, k, c);
}

}  // namespace

TEST_CASE("parse and print rationals") {
  CHECK(parse_rat(" 6/4 ") == frac(3, 2));
  CHECK(parse_rat("-7") == Rat(-7));
  CHECK(to_string(frac(2, 4)) == "1/2");
  CHECK_THROWS_AS(parse_rat("1/0"), Error);
  CHECK_THROWS_AS(parse_rat("x"), Error);
  CHECK_THROWS_AS(parse_rat(""), Error);
}

TEST_CASE("decompose small cases") {
  auto d = decompose(Mat::from_rows({{1, 0}, {0, 0}}));
  CHECK(d.rank == 1);
  CHECK(d.kernel_basis == Mat::from_rows({{0}, {1}}));

  d = decompose(Mat::identity(2));
  CHECK(d.rank == 2);
  CHECK(d.kernel_basis.cols() == 0);

  Mat m = Mat::from_rows({{1, 2}, {2, 4}});
  d = decompose(m);
  CHECK(d.rank == 1);
  REQUIRE(d.kernel_basis.cols() == 1);
  // span{(2,-1)}: the basis vector is a multiple of it
  Vec k = d.kernel_basis.col(0);
  CHECK(k[0] == -2 * k[1]);
  CHECK((m * d.kernel_basis).is_zero());
}

TEST_CASE("gram_adjoint") {
  CHECK(gram_adjoint(Mat::identity(3), IPSpace::standard(3), IPSpace::standard(3)) == Mat::identity(3));
  CHECK(gram_adjoint(Mat::from_rows({{1, 1}}), IPSpace::standard(2), IPSpace::standard(1)) ==
        Mat::from_rows({{1}, {1}}));
  CHECK(gram_adjoint(Mat::from_rows({{1}}), IPSpace(Mat::from_rows({{4}})), IPSpace::standard(1)) ==
        Mat::from_rows({{frac(1, 4)}}));
  CHECK_THROWS_AS(gram_adjoint(Mat::identity(2), IPSpace::standard(3), IPSpace::standard(2)), Error);
}

TEST_CASE("gram_pinv small cases") {
  CHECK(gram_pinv(Mat::identity(2), IPSpace::standard(2), IPSpace::standard(2)) == Mat::identity(2));
  CHECK(gram_pinv(Mat::from_rows({{1, 1}}), IPSpace::standard(2), IPSpace::standard(1)) ==
        Mat::from_rows({{frac(1, 2)}, {frac(1, 2)}}));
  Mat p = Mat::from_rows({{1, 0}, {0, 0}});
  CHECK(gram_pinv(p, IPSpace::standard(2), IPSpace::standard(2)) == p);
  CHECK(gram_pinv(Mat(2, 3), IPSpace::standard(3), IPSpace::standard(2)) == Mat(3, 2));
}

TEST_CASE("induced_gram") {
  CHECK(induced_gram(Mat::identity(2), IPSpace::standard(2)).gram() == Mat::identity(2));
  CHECK(induced_gram(Mat::from_rows({{1, 0}}), IPSpace::standard(2)).gram() == Mat::from_rows({{1}}));
  CHECK(induced_gram(Mat::from_rows({{1, 1}}), IPSpace::standard(2)).gram() == Mat::from_rows({{frac(1, 2)}}));
  try {
    induced_gram(Mat::from_rows({{1, 1}, {2, 2}}), IPSpace::standard(2));
    FAIL("expected NotSurjective");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotSurjective);
  }
}

TEST_CASE("SPD checks") {
  CHECK(is_positive_definite(Mat::from_rows({{2, 1}, {1, 2}})));
  CHECK_FALSE(is_positive_definite(Mat::from_rows({{1, 2}, {2, 1}})));
  CHECK_FALSE(is_positive_definite(Mat::from_rows({{1, 1}, {0, 1}})));
  CHECK_THROWS_AS(IPSpace(Mat::from_rows({{0}})), Error);
}

TEST_CASE("pseudo-inverse identities on random matrices") {
  std::mt19937 rng(20240611);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5, k = 1 + rng() % 4;
    Mat m = random_low_rank(rng, r, c, k);
    IPSpace dom = random_space(rng, c), cod = random_space(rng, r);
    Mat mi = gram_pinv(m, dom, cod);
    CHECK(m * mi * m == m);
    CHECK(mi * m * mi == mi);
    // self-adjointness of the two projectors
    Mat pc = m * mi, pd = mi * m;
    CHECK(gram_adjoint(pc, cod, cod) == pc);
    CHECK(gram_adjoint(pd, dom, dom) == pd);
    // same image and kernel as the adjoint
    Mat ad = gram_adjoint(m, dom, cod);
    CHECK(rank(Mat::hstack({&mi, &ad})) == rank(mi));
    CHECK(rank(mi) == rank(ad));
    CHECK((mi * decompose(ad).kernel_basis).is_zero());
    // rank-nullity
    auto d = decompose(m);
    CHECK(d.rank + d.kernel_basis.cols() == c);
    CHECK((m * d.kernel_basis).is_zero());
  }
}

TEST_CASE("pinv of a surjection ignores the codomain gram") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Mat m = random_mat(rng, 2, 4);
    if (rank(m) < 2) continue;
    IPSpace dom = random_space(rng, 4);
    CHECK(gram_pinv(m, dom, random_space(rng, 2)) == gram_pinv(m, dom, IPSpace::standard(2)));
  }
}

TEST_CASE("pinv equals adjoint for a partial isometry") {
  // projection R^3 -> R^2 onto the first two coordinates is a coisometry
  Mat m = Mat::from_rows({{1, 0, 0}, {0, 1, 0}});
  CHECK(gram_pinv(m, IPSpace::standard(3), IPSpace::standard(2)) ==
        gram_adjoint(m, IPSpace::standard(3), IPSpace::standard(2)));
}

TEST_CASE("solve and inverse") {
  Mat a = Mat::from_rows({{2, 1}, {1, 3}});
  auto x = solve(a, Vec{3, 5});
  REQUIRE(x);
  CHECK(a * *x == Vec{3, 5});
  CHECK(!solve(Mat::from_rows({{1, 1}, {1, 1}}), Vec{1, 2}));
  CHECK(a * inverse(a) == Mat::identity(2));
  CHECK_THROWS_AS(inverse(Mat::from_rows({{1, 2}, {2, 4}})), Error);
}

TEST_CASE("sparse agrees with dense") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    Mat a = random_mat(rng, 4, 5, -1, 1), b = random_mat(rng, 5, 3, -1, 1);
    SpMat sa = SpMat::from_dense(a), sb = SpMat::from_dense(b);
    CHECK((sa * sb).to_dense() == a * b);
    CHECK(sa.transpose().to_dense() == a.transpose());
    CHECK((sa - sa).is_zero());
    Vec v{1, -2, 3, frac(1, 2), 0};
    CHECK(sa * v == a * v);
  }
  Mat blk = Mat::from_rows({{1, 2}, {3, 4}});
  Mat k = SpMat::kron_identity(2, blk).to_dense();
  CHECK(k(2, 3) == 2);
  CHECK(k(0, 2) == 0);
}
