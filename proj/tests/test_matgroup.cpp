#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "whittaker/matgroup.hpp"

using namespace wh;

namespace {

Mat rows(int n, std::initializer_list<double> v) {
  std::vector<double> d(v);
  return GroupElement::from_rows(n, d).matrix();
}

Mat random_orthogonal(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> N;
  Mat x(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) x(i, j) = N(rng);
  Eigen::HouseholderQR<Mat> qr(x);
  return qr.householderQ();
}

double cond(const Mat& m) {
  auto s = m.jacobiSvd().singularValues();
  return s(0) / s(s.size() - 1);
}

}  // namespace

TEST_CASE("group element validation") {
  CHECK_THROWS_AS(GroupElement(Mat::Zero(2, 2)), SingularMatrix);
  CHECK_THROWS_AS(GroupElement(Mat::Identity(2, 3)), DimensionMismatch);
  CHECK_THROWS_AS(GroupElement::from_rows(2, std::vector<double>{1, 2, 2, 4}), SingularMatrix);
  CHECK_NOTHROW(GroupElement::identity(3));
}

TEST_CASE("iwasawa of the identity") {
  auto d = iwasawa_uak(GroupElement::identity(3));
  CHECK(relative_frobenius(d.u, Mat::Identity(3, 3)) < 1e-15);
  CHECK(relative_frobenius(d.k, Mat::Identity(3, 3)) < 1e-15);
  for (int i = 0; i < 3; ++i) CHECK(d.a(i) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("iwasawa of an upper triangular element") {
  auto d = iwasawa_uak(GroupElement(rows(2, {2, 2, 0, 1})));
  CHECK(relative_frobenius(d.u, rows(2, {1, 2, 0, 1})) < 1e-14);
  CHECK(d.a(0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(d.a(1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(relative_frobenius(d.k, Mat::Identity(2, 2)) < 1e-14);
}

TEST_CASE("iwasawa of a rotation") {
  const double c = std::sqrt(0.5);
  Mat g = rows(2, {c, -c, c, c});
  auto d = iwasawa_uak(GroupElement(g));
  CHECK(relative_frobenius(d.u, Mat::Identity(2, 2)) < 1e-14);
  CHECK(relative_frobenius(d.k, g) < 1e-14);
}

TEST_CASE("opposite decomposition examples") {
  auto d = opposite_kan(GroupElement(rows(2, {1, 1, 0, 1})));
  CHECK(d.a(0) == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-14));
  CHECK(d.a(1) == doctest::Approx(std::pow(2.0, 0.5)).epsilon(1e-14));
  CHECK(d.ubar(1, 0) == doctest::Approx(0.5).epsilon(1e-14));

  auto e = opposite_kan(GroupElement(rows(2, {3, 0, 0, 5})));
  CHECK(e.a(0) == doctest::Approx(3.0));
  CHECK(e.a(1) == doctest::Approx(5.0));
  CHECK(relative_frobenius(e.k, Mat::Identity(2, 2)) < 1e-15);
  CHECK(relative_frobenius(e.ubar, Mat::Identity(2, 2)) < 1e-15);

  std::mt19937_64 rng(7);
  Mat q = random_orthogonal(rng, 3);
  auto f = opposite_kan(GroupElement(q));
  CHECK(relative_frobenius(f.k, q) < 1e-13);
  CHECK(relative_frobenius(f.ubar, Mat::Identity(3, 3)) < 1e-13);
}

TEST_CASE("embedding and superdiagonal") {
  auto e = embed_gl(GroupElement(rows(1, {2})), 2);
  CHECK(e.matrix() == rows(2, {2, 0, 0, 1}));
  CHECK(embed_gl(GroupElement::identity(2), 3).matrix() == Mat::Identity(3, 3));
  auto r = embed_gl(GroupElement(rows(2, {0, 1, -1, 0})), 3);
  CHECK(r.matrix() == rows(3, {0, 1, 0, -1, 0, 0, 0, 0, 1}));
  CHECK_THROWS_AS(embed_gl(GroupElement::identity(3), 3), DimensionMismatch);

  CHECK(superdiagonal(GroupElement::identity(3)) == std::vector<double>{0, 0});
  CHECK(superdiagonal(GroupElement(rows(3, {1, 3, 7, 0, 1, -1, 0, 0, 1}))) == std::vector<double>{3, -1});
  CHECK(superdiagonal(GroupElement(rows(2, {1, 5, 0, 1}))) == std::vector<double>{5});
}

TEST_CASE("mirabolic elements") {
  CHECK_THROWS_AS(MirabolicElement(GroupElement(rows(2, {1, 0, 1, 1}))), NotMirabolic);
  auto p = MirabolicElement::from_parts(GroupElement(rows(2, {2, 1, 0, 3})), std::vector<double>{4, 5});
  CHECK(p.block().matrix() == rows(2, {2, 1, 0, 3}));
  CHECK(p.translation() == std::vector<double>{4, 5});
}

TEST_CASE("random reconstruction, uniqueness and left K invariance") {
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> N;
  std::uniform_real_distribution<double> L(-2.0, 2.0);
  int tested = 0;
  double worst = 0.0;
  while (tested < 1000) {
    const int n = 2 + tested % 2;
    Mat g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = N(rng);
    if (cond(g) >= 1e6) continue;
    ++tested;
    GroupElement G(g);
    auto d = iwasawa_uak(G);
    Mat rec = d.u * d.a.asDiagonal() * d.k;
    worst = std::max(worst, relative_frobenius(rec, g));
    CHECK((d.k.transpose() * d.k - Mat::Identity(n, n)).norm() < 1e-12);
    auto o = opposite_kan(G);
    Mat rec2 = o.k * o.a.asDiagonal() * o.ubar;
    worst = std::max(worst, relative_frobenius(rec2, g));
    CHECK((o.k.transpose() * o.k - Mat::Identity(n, n)).norm() < 1e-12);
    for (int i = 0; i < n; ++i) {
      CHECK(d.a(i) > 0);
      CHECK(o.a(i) > 0);
    }

    Mat k0 = random_orthogonal(rng, n);
    auto o2 = opposite_kan(GroupElement(Mat(k0 * g)));
    CHECK((o2.a - o.a).norm() < 1e-10 * o.a.norm());
    CHECK(relative_frobenius(o2.ubar, o.ubar) < 1e-10);

    // Uniqueness from random valid factors.
    Mat u = Mat::Identity(n, n);
    Mat ub = Mat::Identity(n, n);
    Vec a(n);
    for (int i = 0; i < n; ++i) {
      a(i) = std::exp(L(rng));
      for (int j = i + 1; j < n; ++j) {
        u(i, j) = L(rng);
        ub(j, i) = L(rng);
      }
    }
    auto du = iwasawa_uak(GroupElement(Mat(u * a.asDiagonal() * k0)));
    CHECK(relative_frobenius(du.u, u) < 1e-10);
    CHECK((du.a - a).norm() < 1e-10 * a.norm());
    CHECK(relative_frobenius(du.k, k0) < 1e-10);
    auto dk = opposite_kan(GroupElement(Mat(k0 * a.asDiagonal() * ub)));
    CHECK(relative_frobenius(dk.ubar, ub) < 1e-10);
    CHECK((dk.a - a).norm() < 1e-10 * a.norm());
    CHECK(relative_frobenius(dk.k, k0) < 1e-10);
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("holomorphic decomposition agrees with the real one") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> N;
  for (int t = 0; t < 50; ++t) {
    Mat g(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g(i, j) = N(rng);
    if (std::abs(g.determinant()) < 1e-3) continue;
    auto o = opposite_kan(GroupElement(g));
    auto h = holomorphic_opposite_kan(CMat(g.cast<cd>()), true);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(h.log_a(i) - std::log(o.a(i))) < 1e-10);
    }
    CHECK((h.k - o.k.cast<cd>()).norm() < 1e-9);
  }
}
