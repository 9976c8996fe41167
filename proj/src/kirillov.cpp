#include "whittaker/kirillov.hpp"

#include <cmath>
#include <numbers>

namespace wh {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_identity(const Mat& g) { return (g - Mat::Identity(g.rows(), g.cols())).norm() == 0.0; }

Mat embed_ak(std::span<const double> a_sub, const Mat& k_sub) {
  const int m = static_cast<int>(a_sub.size());
  Mat g = Mat::Identity(m + 1, m + 1);
  for (int i = 0; i < m; ++i) g.row(i).head(m) = a_sub[i] * k_sub.row(i);
  return g;
}

}  // namespace

KirillovFunction::KirillovFunction(int n, Data data, KirillovTag tag) : n_(n), data_(std::move(data)), tag_(tag) {
  if (n < 2 || n > kMaxDim) throw DimensionMismatch("Kirillov functions need 2 <= n <= kMaxDim");
  if (!data_) throw ConfigError("Kirillov function without data");
}

cd KirillovFunction::operator()(std::span<const double> a_sub, const Mat& k_sub) const {
  if (static_cast<int>(a_sub.size()) != n_ - 1 || k_sub.rows() != n_ - 1 || k_sub.cols() != n_ - 1) {
    throw DimensionMismatch("Kirillov function evaluated at a point of the wrong size");
  }
  return data_(a_sub, k_sub);
}

double measure_density(std::span<const double> a_sub) {
  const int m = static_cast<int>(a_sub.size());
  if (m < 1) throw DimensionMismatch("measure_density needs n >= 2");
  const RhoVector r = rho(m);
  double e = 0.0;
  for (int i = 0; i < m; ++i) {
    if (!(a_sub[i] > 0.0)) throw ConfigError("a' must be positive");
    e += (-2.0 * r[i] - 1.0) * std::log(a_sub[i]);
  }
  return std::exp(e);
}

KirillovFunction whittaker_restriction(const BoundaryFunction& f, const QuadratureSpec& spec) {
  const int n = f.n();
  const WhittakerCharacter ones(std::vector<double>(n - 1, 1.0));
  auto data = [f, spec, ones, n](std::span<const double> a_sub, const Mat& k_sub) {
    std::vector<double> a(a_sub.begin(), a_sub.end());
    a.push_back(1.0);
    Mat k = Mat::Identity(n, n);
    k.topLeftCorner(n - 1, n - 1) = k_sub;
    return whittaker_ak(f, ones, a, k, spec).value;
  };
  return KirillovFunction(n, std::move(data), KirillovTag::whittaker_restriction);
}

KirillovFunction log_gaussian_bump(int n, std::vector<double> center, double width, cd amplitude,
                                   std::function<cd(const Mat&)> profile) {
  if (static_cast<int>(center.size()) != n - 1) throw DimensionMismatch("bump center must have n-1 entries");
  if (!(width > 0.0)) throw ConfigError("bump width must be positive");
  auto data = [center = std::move(center), width, amplitude, profile = std::move(profile)](
                  std::span<const double> a_sub, const Mat& k_sub) {
    double q = 0.0;
    for (std::size_t i = 0; i < center.size(); ++i) {
      const double d = std::log(a_sub[i]) - center[i];
      q += d * d;
    }
    const cd base = amplitude * std::exp(-q / (2.0 * width * width));
    return profile ? base * profile(k_sub) : base;
  };
  return KirillovFunction(n, std::move(data), KirillovTag::synthetic_bump);
}

TranslatedPoint translate_point(std::span<const double> a_sub, const Mat& k_sub, const MirabolicElement& h) {
  const int n = h.n();
  const int m = n - 1;
  if (static_cast<int>(a_sub.size()) != m) throw DimensionMismatch("point and h differ in dimension");
  const Mat p = embed_ak(a_sub, k_sub) * h.element().matrix();
  const IwasawaUAK d = iwasawa_uak(GroupElement(Mat(p.topLeftCorner(m, m))));
  double x = p(m - 1, m);
  for (int i = 0; i + 1 < m; ++i) x += d.u(i, i + 1);
  TranslatedPoint out;
  out.phase = std::polar(1.0, kTwoPi * std::remainder(x, 1.0));
  out.a_sub.assign(d.a.data(), d.a.data() + m);
  out.k_sub = d.k;
  return out;
}

KirillovFunction right_translate(const KirillovFunction& W, const MirabolicElement& h) {
  if (h.n() != W.n()) throw DimensionMismatch("h and W differ in dimension");
  if (is_identity(h.element().matrix())) return W;
  auto data = [W, h](std::span<const double> a_sub, const Mat& k_sub) {
    const TranslatedPoint t = translate_point(a_sub, k_sub, h);
    return t.phase * W(t.a_sub, t.k_sub);
  };
  return KirillovFunction(W.n(), std::move(data), KirillovTag::translated);
}

WeightedL2Report weighted_norm(const KirillovFunction& W, double s, const QuadratureSpec& spec,
                               const KirillovNormOptions& opt) {
  if (!(s >= 0.0)) throw ConfigError("the weight exponent s must be nonnegative");
  const int m = W.n() - 1;
  const std::vector<Mat> ks = sample_K(m, m == 1 ? 1 : opt.angles);
  const RhoVector r = rho(m);
  // Against dt = prod da'/a': |W|^2 |det a'|^{2s} a'^{-2 rho_{n-1}}.
  const Integrand F = [&](std::span<const double> t) -> cd {
    std::vector<double> a(m);
    double e = 0.0;
    for (int i = 0; i < m; ++i) {
      a[i] = std::exp(t[i]);
      e += (2.0 * s - 2.0 * r[i]) * t[i];
    }
    double sum = 0.0;
    for (const Mat& k : ks) sum += std::norm(W(a, k));
    return sum / ks.size() * std::exp(e);
  };
  QuadratureSpec q = spec;
  q.dim = m;
  q.frequencies.clear();
  q.scale.clear();
  WeightedL2Report rep;
  rep.boxes = expanding_box_integral(F, opt.radii, q);
  for (const auto& b : rep.boxes) rep.increments.push_back(b.increment);
  rep.fitted_power = std::nan("");
  rep.predicted_power = std::nan("");
  rep.verdict = l2_verdict(rep.boxes);
  return rep;
}

double unitarity_check(const KirillovFunction& W, const MirabolicElement& h, double s, const QuadratureSpec& spec,
                       const KirillovNormOptions& opt) {
  if (!(s >= 0.0)) throw ConfigError("the weight exponent s must be nonnegative");
  const double det_h = std::abs(h.element().matrix().determinant());
  const double n0 = weighted_norm(W, s, spec, opt).boxes.back().value;
  // h compresses directions on the K' orbit by up to the condition number
  // of its block, so the translated profile needs that many more angles.
  const int m = W.n() - 1;
  const auto sv = h.element().matrix().topLeftCorner(m, m).jacobiSvd().singularValues();
  KirillovNormOptions opt1 = opt;
  opt1.angles = static_cast<int>(opt.angles * std::ceil(sv(0) / sv(m - 1)));
  const double n1 = weighted_norm(right_translate(W, h), s, spec, opt1).boxes.back().value;
  return std::abs(std::pow(det_h, s) * std::sqrt(n1 / n0) - 1.0);
}

}  // namespace wh
