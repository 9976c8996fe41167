#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "whittaker/bounds.hpp"

using namespace wh;

namespace {

constexpr double pi = std::numbers::pi;

BoundaryFunction f0(std::vector<cd> v) { return BoundaryFunction::spherical(SpectralParam(std::move(v))); }

// Wh(diag(r, 1)) / r^{rho+v} at v = (-1/2, 1/2).
double gl2_closed(double r) { return pi * std::exp(-2 * pi * r); }

}  // namespace

TEST_CASE("exponent vectors and grids validate") {
  CHECK_THROWS_AS(ExponentVector({1, -1}), ConfigError);
  CHECK(ExponentVector({0, 2}).size() == 2);
  GridSpec g;
  g.r_min = 0.0;
  CHECK_THROWS_AS(g.validate(), ConfigError);
  g.r_min = 2.0;
  g.r_max = 1.0;
  CHECK_THROWS_AS(g.validate(), ConfigError);
  g = GridSpec{0.01, 100.0, 5, {}};
  const auto ax = g.axis();
  REQUIRE(ax.size() == 5);
  CHECK(ax.front() == 0.01);
  CHECK(ax[2] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ax.back() == 100.0);

  // Decade step: covering [0.004, 250] adds one point at each end.
  const GridSpec w = g.extended(0.004, 250.0);
  CHECK(w.count == 7);
  CHECK(w.r_min == doctest::Approx(0.001).epsilon(1e-12));
  CHECK(w.r_max == doctest::Approx(1000.0).epsilon(1e-12));
  const auto wx = w.axis();
  for (int i = 0; i < 5; ++i) CHECK(wx[i + 1] == doctest::Approx(ax[i]).epsilon(1e-12));
  CHECK(g.extended(0.01, 100.0).count == 5);

  g.count = 1;
  CHECK_THROWS_AS(g.axis(), ConfigError);
}

TEST_CASE("ladder identity for GL(2)") {
  const auto f = f0({-0.5, 0.5});
  const QuadratureSpec spec = default_jacquet_spec(2);
  const WhittakerCharacter m({1.0});
  const std::vector<double> a1{1.0, 1.0}, a2{2.0, 1.0};
  const LadderCheck c1 = ladder_identity_check(f, m, 0, a1, spec);
  CHECK(std::abs(c1.wh - cd(pi * std::exp(-2 * pi))) < 1e-10);
  CHECK(c1.expected_magnitude == doctest::Approx(2 * pi * pi * std::exp(-2 * pi)).epsilon(1e-9));
  CHECK(c1.rel_error < 1e-4);
  CHECK(std::abs(std::abs(c1.phase) - 1.0) < 1e-4);
  // Bilinear pairing: X_i multiplies the Whittaker function by +2 pi i m_i r_i.
  CHECK(std::abs(c1.phase - cd(0.0, 1.0)) < 1e-4);

  const LadderCheck c2 = ladder_identity_check(f, m, 0, a2, spec);
  CHECK(c2.rel_error < 1e-4);
  const double f1 = std::abs(c1.wh_x) / std::abs(c1.wh);
  const double f2 = std::abs(c2.wh_x) / std::abs(c2.wh);
  CHECK(f2 / f1 == doctest::Approx(2.0).epsilon(1e-4));

  // Scaling m by -3 scales the factor by 3 and conjugates the phase convention consistently.
  const LadderCheck c3 = ladder_identity_check(f, WhittakerCharacter({-3.0}), 0, a1, spec);
  CHECK(c3.rel_error < 1e-4);
  CHECK(std::abs(c3.phase - cd(0.0, 1.0)) < 1e-4);
}

TEST_CASE("ladder identity for GL(3) at one point") {
  const auto f = f0({-0.5, 0.0, 0.5});
  QuadratureSpec spec = default_jacquet_spec(3);
  spec.rel_tol = 1e-3;
  const std::vector<double> a = a_from_ratios(std::vector<double>{0.3, 0.3});
  const LadderCheck c = ladder_identity_check(f, WhittakerCharacter({1.0, 1.0}), 1, a, spec);
  CHECK(c.rel_error < 1e-3);
  CHECK(std::abs(c.phase - cd(0.0, 1.0)) < 1e-3);
}

TEST_CASE("ratio scan for GL(2) follows the closed form") {
  const auto f = f0({-0.5, 0.5});
  const WhittakerCharacter m({1.0});
  const QuadratureSpec spec = default_jacquet_spec(2);
  const GridSpec grid{1e-3, 10.0, 25, {}};
  const auto reps = theoremC_ratio_scan(f, m, {ExponentVector({0}), ExponentVector({1})}, grid, spec);
  REQUIRE(reps.size() == 2);
  const ScanReport& r0 = reps[0];
  REQUIRE(r0.points.size() == 25);
  for (const auto& p : r0.points) {
    CHECK(p.converged);
    // The scan accepts an absolute error of 1e-6 times the majorant pi.
    CHECK(std::abs(p.ratio - gl2_closed(p.r[0])) < 4e-6);
    CHECK(p.ratio <= r0.sup);
  }
  CHECK(r0.sup >= gl2_closed(1e-3) - 4e-6);
  CHECK(r0.sup <= pi);
  CHECK(r0.points[r0.argmax].r[0] == 1e-3);
  CHECK(r0.shell_max == r0.sup);
  CHECK(r0.interior_max < r0.sup);

  for (std::size_t i = 0; i < reps[1].points.size(); ++i) {
    const auto& p = reps[1].points[i];
    CHECK(std::abs(p.ratio - gl2_closed(p.r[0]) * p.r[0]) < 4e-6);
    CHECK(p.abs_wh == r0.points[i].abs_wh);
  }

  // A fine grid locates the maximum of pi r e^{-2 pi r} at r = 1/(2 pi).
  const ScanReport fine = theoremC_ratio_scan(f, m, ExponentVector({1}), GridSpec{0.05, 1.0, 301, {}}, spec);
  CHECK(fine.sup == doctest::Approx(std::exp(-1.0) / 2).epsilon(1e-4));
  CHECK(fine.points[fine.argmax].r[0] == doctest::Approx(1 / (2 * pi)).epsilon(0.01));
  CHECK(fine.shell_max < 0.9 * fine.sup);
}

TEST_CASE("scan parallel merge matches the serial result") {
  const auto f = f0({-0.4, 0.6});
  const WhittakerCharacter m({1.0});
  const GridSpec grid{0.01, 5.0, 12, {}};
  ScanOptions serial, parallel;
  parallel.threads = 3;
  const auto a = theoremC_ratio_scan(f, m, ExponentVector({2}), grid, default_jacquet_spec(2), serial);
  const auto b = theoremC_ratio_scan(f, m, ExponentVector({2}), grid, default_jacquet_spec(2), parallel);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].r == b.points[i].r);
    CHECK(a.points[i].ratio == b.points[i].ratio);
  }
  CHECK(a.argmax == b.argmax);
}

TEST_CASE("scan with K samples") {
  const SpectralParam p({-0.5, 0.5}, {1, -1});
  const auto f = BoundaryFunction::k_finite(p, {Vec::Unit(2, 0), Vec::Unit(2, 0)}, {0, 1});
  GridSpec grid{0.1, 2.0, 4, sample_K(2, 8)};
  const auto rep = theoremC_ratio_scan(f, WhittakerCharacter({1.0}), ExponentVector({0}), grid,
                                       default_jacquet_spec(2));
  CHECK(rep.points.size() == 4 * 16);
  for (const auto& pt : rep.points) CHECK(pt.converged);
  CHECK(rep.sup > 0.0);
}

TEST_CASE("Siegel decay along a GL(2) ray") {
  const auto f = f0({-0.5, 0.5});
  const ScanReport rep = siegel_decay_check(f, WhittakerCharacter({1.0}), 1.0, ExponentVector({4}), {1, 2, 4, 8},
                                            default_jacquet_spec(2));
  REQUIRE(rep.points.size() == 4);
  for (const auto& p : rep.points) {
    const double r = p.r[0];
    CHECK(p.ratio == doctest::Approx(gl2_closed(r) * std::pow(r, 4)).epsilon(1e-6));
  }
  CHECK(strictly_decreasing(rep));
  CHECK_THROWS_AS(siegel_decay_check(f, WhittakerCharacter({1.0}), 2.0, ExponentVector({0}), {1.0},
                                     default_jacquet_spec(2)),
                  ConfigError);
}

TEST_CASE("c-function limit for GL(2)") {
  const QuadratureSpec spec = default_jacquet_spec(2);
  const auto c1 = cfunction_limit(SpectralParam({-0.5, 0.5}), WhittakerCharacter({1.0}), spec);
  CHECK(c1.direct.value.real() == doctest::Approx(pi).epsilon(1e-9));
  CHECK(c1.limit.real() == doctest::Approx(pi * std::exp(-2e-3 * pi)).epsilon(1e-8));
  CHECK(c1.rel_diff < 0.01);
  const auto c2 = cfunction_limit(SpectralParam({-1.0, 1.0}), WhittakerCharacter({1.0}), spec);
  CHECK(c2.direct.value.real() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(c2.rel_diff < 0.01);
  CHECK_THROWS_AS(cfunction_limit(SpectralParam({0.5, -0.5}), WhittakerCharacter({1.0}), spec), ChamberViolation);
}

TEST_CASE("verdict rule") {
  auto boxes = [](std::vector<double> inc) {
    std::vector<BoxPartial> out;
    double total = 0;
    for (double x : inc) {
      total += x;
      BoxPartial b;
      b.value = total;
      b.increment = x;
      out.push_back(b);
    }
    return out;
  };
  CHECK(l2_verdict(boxes({1, 1, 1, 1, 1})) == Verdict::diverged);
  CHECK(l2_verdict(boxes({1, 0.5, 0.25, 0.125, 0.06})) == Verdict::converged);
  CHECK(l2_verdict(boxes({1, 0.95, 0.5})) == Verdict::converged);
  CHECK(l2_verdict(boxes({1, 0.5, 0.25, 0.24})) == Verdict::inconclusive);
  CHECK(l2_verdict(boxes({1, 1})) == Verdict::inconclusive);
  CHECK(std::string(to_string(Verdict::diverged)) == "diverged");
}

TEST_CASE("weighted L2 analogues for GL(2)") {
  const WhittakerCharacter m({1.0});
  QuadratureSpec outer;
  outer.rel_tol = 1e-6;
  const QuadratureSpec inner = default_jacquet_spec(2);

  const auto f = f0({-0.5, 0.5});
  const auto a1 = weighted_l2_theoremA(f, m, ExponentVector({1}), outer, inner);
  CHECK(a1.verdict == Verdict::converged);
  // pi^2 int r e^{-4 pi r} dr.
  CHECK(a1.boxes.back().value == doctest::Approx(1.0 / 16).epsilon(1e-5));
  CHECK(a1.fitted_power == doctest::Approx(1.0).epsilon(0.05));
  CHECK(a1.predicted_power == doctest::Approx(1.0));

  const auto a0 = weighted_l2_theoremA(f, m, ExponentVector({0}), outer, inner);
  CHECK(a0.verdict == Verdict::diverged);
  CHECK(a0.fitted_power == doctest::Approx(-1.0).epsilon(0.05));

  const auto g = f0({-0.3, 0.3});
  const auto b0 = weighted_l2_theoremA(g, m, ExponentVector({0}), outer, inner);
  CHECK(b0.verdict == Verdict::converged);
  CHECK(b0.fitted_power == doctest::Approx(-0.6).epsilon(0.05));
  CHECK(b0.predicted_power == doctest::Approx(-0.6));
  for (std::size_t k = 1; k < b0.boxes.size(); ++k) CHECK(b0.boxes[k].value >= b0.boxes[k - 1].value);

  const auto e2 = weighted_l2_theoremB(f, m, 2.0, outer, inner);
  CHECK(e2.verdict == Verdict::converged);
  CHECK(e2.boxes.back().value == doctest::Approx(a1.boxes.back().value).epsilon(1e-9));
  const auto e0 = weighted_l2_theoremB(f, m, 0.0, outer, inner);
  CHECK(e0.verdict == a0.verdict);
  CHECK_THROWS_AS(weighted_l2_theoremB(f, m, -1.0, outer, inner), ConfigError);
}

TEST_CASE("Theorem B K-average over O(1) for a sign-twisted vector") {
  const SpectralParam p({-0.5, 0.5}, {1, -1});
  const auto f = BoundaryFunction::k_finite(p, {Vec::Unit(2, 0), Vec::Unit(2, 0)}, {0, 1});
  QuadratureSpec outer;
  outer.rel_tol = 1e-6;
  const WhittakerCharacter m({1.0});
  const auto rep = weighted_l2_theoremB(f, m, 2.0, outer, default_jacquet_spec(2));
  CHECK(rep.verdict == Verdict::converged);
  // K_1 = {+1, -1}: the average of the two restrictions, computed directly.
  QuadratureSpec s = outer;
  s.dim = 1;
  const Mat minus = k_sub_samples(2, 1)[1];
  QuadratureSpec in = default_jacquet_spec(2);
  in.abs_tol = 1e-14;
  const Integrand direct = [&](std::span<const double> t) -> cd {
    const std::vector<double> a{std::exp(t[0]), 1.0};
    const double x = std::abs(whittaker_ak(f, m, a, Mat::Identity(2, 2), in).value);
    const double y = std::abs(whittaker_ak(f, m, a, minus, in).value);
    return 0.5 * (x * x + y * y) * std::exp(2 * t[0]);
  };
  const auto boxes = expanding_box_integral(direct, {16.0}, s);
  CHECK(rep.boxes.back().value == doctest::Approx(boxes.back().value).epsilon(1e-5));
}
