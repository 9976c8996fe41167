#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "whittaker/kirillov.hpp"

using namespace wh;

namespace {

constexpr double pi = std::numbers::pi;

Mat rot(double th) {
  Mat k(2, 2);
  k << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  return k;
}

MirabolicElement mirabolic(const Mat& block, std::vector<double> x) {
  return MirabolicElement::from_parts(GroupElement(block), x);
}

KirillovFunction sample_bump() {
  auto profile = [](const Mat& k) { return cd(1.0) + 0.5 * k(0, 0) + cd(0, 0.3) * k(1, 0); };
  return log_gaussian_bump(3, {0.3, -0.2}, 0.6, 1.0, profile);
}

QuadratureSpec norm_spec() {
  QuadratureSpec s;
  s.rel_tol = 1e-8;
  return s;
}

}  // namespace

TEST_CASE("measure density") {
  CHECK(measure_density(std::vector<double>{1.0, 1.0}) == 1.0);
  CHECK(measure_density(std::vector<double>{std::exp(1.0), 1.0}) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(measure_density(std::vector<double>{1.0, 3.0}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(measure_density(std::vector<double>{0.25}) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK_THROWS_AS(measure_density(std::vector<double>{-1.0}), ConfigError);
}

TEST_CASE("right translation") {
  const KirillovFunction W = sample_bump();
  const std::vector<double> a{0.8, 1.7};
  const Mat k = rot(0.4);

  SUBCASE("identity") {
    const auto R = right_translate(W, MirabolicElement(GroupElement::identity(3)));
    CHECK(R(a, k) == W(a, k));
  }
  SUBCASE("orthogonal block moves only the K part") {
    const Mat k0 = rot(-1.1);
    Mat refl = Mat::Identity(2, 2);
    refl(1, 1) = -1.0;
    for (const Mat& kk : {k0, Mat(rot(2.0) * refl)}) {
      const auto R = right_translate(W, mirabolic(kk, {0.0, 0.0}));
      CHECK(std::abs(R(a, k) - W(a, Mat(k * kk))) < 1e-12);
    }
  }
  SUBCASE("translations only change the phase") {
    const auto h = mirabolic(Mat::Identity(2, 2), {0.7, -1.9});
    const auto R = right_translate(W, h);
    const TranslatedPoint t = translate_point(a, k, h);
    CHECK(std::abs(t.a_sub[0] - a[0]) < 1e-13);
    CHECK(std::abs(t.a_sub[1] - a[1]) < 1e-13);
    CHECK(std::abs(std::abs(R(a, k)) - std::abs(W(a, k))) < 1e-13);
    // x'' = a' k' x, whose last entry fixes the phase.
    const Vec x = Vec(Eigen::Vector2d(0.7, -1.9));
    const double last = a[1] * (k.row(1).dot(x));
    CHECK(std::abs(t.phase - std::polar(1.0, 2 * pi * last)) < 1e-12);
  }
  SUBCASE("group law and unimodular phase") {
    std::mt19937 gen(7);
    std::normal_distribution<double> nd(0.0, 0.5);
    for (int trial = 0; trial < 10; ++trial) {
      Mat b1 = Mat::Identity(2, 2), b2 = Mat::Identity(2, 2);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          b1(i, j) += nd(gen);
          b2(i, j) += nd(gen);
        }
      if (std::abs(b1.determinant()) < 0.2 || std::abs(b2.determinant()) < 0.2) continue;
      const auto h1 = mirabolic(b1, {nd(gen), nd(gen)});
      const auto h2 = mirabolic(b2, {nd(gen), nd(gen)});
      const MirabolicElement h12(h1.element() * h2.element());
      const auto lhs = right_translate(right_translate(W, h2), h1);
      const auto rhs = right_translate(W, h12);
      const std::vector<double> p{std::exp(nd(gen)), std::exp(nd(gen))};
      const Mat kp = rot(nd(gen) * 3);
      CHECK(std::abs(lhs(p, kp) - rhs(p, kp)) < 1e-10);
      CHECK(std::abs(std::abs(translate_point(p, kp, h12).phase) - 1.0) < 1e-15);
    }
  }
  CHECK_THROWS_AS(right_translate(W, MirabolicElement(GroupElement::identity(2))), DimensionMismatch);
}

TEST_CASE("weighted norm of synthetic bumps") {
  const double sigma = 0.7, amp = 1.3;
  const auto W = log_gaussian_bump(2, {0.4}, sigma, amp);
  const auto rep = weighted_norm(W, 0.0, norm_spec());
  CHECK(rep.verdict == Verdict::converged);
  CHECK(rep.boxes.back().value == doctest::Approx(amp * amp * sigma * std::sqrt(pi)).epsilon(1e-8));

  const auto W2 = log_gaussian_bump(2, {0.4}, sigma, 2.0 * amp);
  CHECK(weighted_norm(W2, 0.0, norm_spec()).boxes.back().value ==
        doctest::Approx(4.0 * rep.boxes.back().value).epsilon(1e-10));

  // Essentially supported in |det a'| < 1: the norm cannot grow with s.
  const auto low = log_gaussian_bump(3, {-2.0, -2.5}, 0.3);
  double prev = INFINITY;
  for (double s : {0.0, 0.5, 1.0, 2.0}) {
    const double v = weighted_norm(low, s, norm_spec()).boxes.back().value;
    CHECK(v <= prev);
    prev = v;
  }
  CHECK_THROWS_AS(weighted_norm(W, -0.1, norm_spec()), ConfigError);
}

TEST_CASE("perturbed unitarity on synthetic bumps") {
  const KirillovFunction W = sample_bump();
  CHECK(unitarity_check(W, MirabolicElement(GroupElement::identity(3)), 0.7, norm_spec()) == 0.0);

  const auto dil = MirabolicElement(GroupElement::diagonal(std::vector<double>{2.0, 2.0, 1.0}));
  CHECK(unitarity_check(W, dil, 0.5, norm_spec()) < 1e-6);

  const auto tr = mirabolic(Mat::Identity(2, 2), {0.9, -0.4});
  for (double s : {0.0, 1.3}) CHECK(unitarity_check(W, tr, s, norm_spec()) < 1e-6);

  Mat b(2, 2);
  b << 1.3, 0.4, -0.2, 0.9;
  const auto h = mirabolic(b, {0.7, -0.3});
  for (double s : {0.0, 0.5, 1.3}) CHECK(unitarity_check(W, h, s, norm_spec()) < 1e-6);

  // Without the |det h|^s factor the norms differ.
  const double n0 = weighted_norm(W, 0.5, norm_spec()).boxes.back().value;
  const double n1 = weighted_norm(right_translate(W, dil), 0.5, norm_spec()).boxes.back().value;
  CHECK(std::sqrt(n1 / n0) == doctest::Approx(0.5).epsilon(1e-6));  // |det h|^{-1/2}
}

TEST_CASE("translation agrees with the Whittaker function at the translated point") {
  SUBCASE("GL(2)") {
    const auto f = BoundaryFunction::spherical(SpectralParam({-0.5, 0.5}));
    const QuadratureSpec spec = default_jacquet_spec(2);
    const auto W = whittaker_restriction(f, spec);
    const auto h = mirabolic(Mat::Constant(1, 1, -1.7), {0.35});
    const auto R = right_translate(W, h);
    const WhittakerCharacter one({1.0});
    for (double r : {0.2, 1.0, 2.5}) {
      for (double sign : {1.0, -1.0}) {
        const std::vector<double> a{r};
        const Mat k = Mat::Constant(1, 1, sign);
        Mat g = Mat::Identity(2, 2);
        g(0, 0) = r * sign;
        const GroupElement p = GroupElement(g) * h.element();
        const cd direct = whittaker(f, one, p, spec).value;
        CHECK(std::abs(R(a, k) - direct) < 1e-9 * std::max(1.0, std::abs(direct)));
        // Closed form: |Wh(p)| = pi e^{-2 pi |a_1|} with a_1 = |p_11|.
        CHECK(std::abs(direct) == doctest::Approx(pi * std::exp(-2 * pi * 1.7 * r)).epsilon(1e-8));
      }
    }
  }
  SUBCASE("GL(3)") {
    const auto f = BoundaryFunction::spherical(SpectralParam({-0.5, 0.0, 0.5}));
    QuadratureSpec spec = default_jacquet_spec(3);
    spec.rel_tol = 1e-4;
    const auto W = whittaker_restriction(f, spec);
    Mat b(2, 2);
    b << 0.9, 0.2, -0.1, 1.1;
    const auto h = mirabolic(b, {0.3, -0.6});
    const std::vector<double> a{0.1, 0.3};
    const Mat k = rot(0.5);
    const cd via_kirillov = right_translate(W, h)(a, k);
    Mat g = Mat::Identity(3, 3);
    g.topLeftCorner(2, 2) = Vec(Eigen::Vector2d(a[0], a[1])).asDiagonal() * k;
    const WhittakerValue direct = whittaker(f, WhittakerCharacter({1.0, 1.0}), GroupElement(g) * h.element(), spec);
    CHECK(std::abs(via_kirillov - direct.value) < 10 * spec.rel_tol * std::abs(direct.value));
  }
}
