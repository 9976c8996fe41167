#include "whittaker/jacquet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace wh {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const cd kI(0.0, 1.0);

double sgn(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

// Integration coordinates: superdiagonal first, then the next diagonal, ...
std::vector<std::pair<int, int>> coordinate_pairs(int n) {
  std::vector<std::pair<int, int>> out;
  for (int gap = 1; gap < n; ++gap)
    for (int i = 0; i + gap < n; ++i) out.emplace_back(i, i + gap);
  return out;
}

// Point of the deformed domain and the Jacobian of the deformation.
struct ContourMap {
  int n;
  std::vector<std::pair<int, int>> pairs;
  Contour c;

  ContourMap(int n_in, Contour contour) : n(n_in), pairs(coordinate_pairs(n_in)), c(std::move(contour)) {}

  cd build(std::span<const double> x, CMat& g, double homotopy = 1.0) const {
    std::array<cd, kMaxDim> phase;
    phase[0] = 1.0;
    cd jac = 1.0;
    for (int l = 0; l + 1 < n; ++l) {
      const double s = x[l];
      const double q = std::sqrt(1.0 + s * s);
      const double a = homotopy * c.angle[l];
      const cd rot = std::polar(1.0, a * s / q);
      phase[l + 1] = phase[l] * std::conj(rot);
      jac *= rot * (1.0 + kI * a * s / (q * q * q));
    }
    g = CMat::Identity(n, n);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const auto [i, j] = pairs[p];
      const cd rot = phase[i] * std::conj(phase[j]);
      g(i, j) = rot * x[p];
      if (j - i >= 2) jac *= rot;
    }
    // Left translation by n_c has unit Jacobian in these coordinates.
    for (int i = 0; i + 1 < n; ++i) {
      const double sh = homotopy * c.shift[i];
      if (sh == 0.0) continue;
      for (int j = i + 1; j < n; ++j) g(i, j) += (kI * sh) * g(i + 1, j);
    }
    return jac;
  }
};

void check_character(const WhittakerCharacter& m, int n) {
  if (m.size() != n - 1) throw DimensionMismatch("character needs n-1 entries");
}

}  // namespace

WhittakerCharacter::WhittakerCharacter(std::vector<double> m_in, bool degenerate_in)
    : m(std::move(m_in)), degenerate(degenerate_in) {
  for (double x : m) {
    if (!std::isfinite(x)) throw ConfigError("character entries must be finite");
    if (x == 0.0 && !degenerate) throw ConfigError("zero character entry requires the degenerate flag");
  }
}

cd psi_eval(const WhittakerCharacter& m, const GroupElement& u) {
  const int n = u.n();
  check_character(m, n);
  for (int i = 0; i < n; ++i) {
    if (std::abs(u(i, i) - 1.0) > 1e-12) throw NotUnipotent("diagonal entries must be 1");
    for (int j = 0; j < i; ++j) {
      if (std::abs(u(i, j)) > 1e-12) throw NotUnipotent("entries below the diagonal must vanish");
    }
  }
  double phase = 0.0;
  for (int i = 0; i + 1 < n; ++i) phase += m.m[i] * u(i, i + 1);
  return std::exp(kI * (kTwoPi * phase));
}

WhittakerCharacter ad_a_m(std::span<const double> a, const WhittakerCharacter& m) {
  if (a.size() != m.m.size() + 1) throw DimensionMismatch("a must have one more entry than m");
  std::vector<double> out(m.m.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(a[i] > 0.0) || !(a[i + 1] > 0.0)) throw ConfigError("a must be positive");
    out[i] = a[i] / a[i + 1] * m.m[i];
  }
  return WhittakerCharacter(std::move(out), m.degenerate);
}

bool Contour::trivial() const {
  return std::all_of(angle.begin(), angle.end(), [](double a) { return a == 0.0; }) &&
         std::all_of(shift.begin(), shift.end(), [](double s) { return s == 0.0; });
}

Contour real_contour(int n) { return Contour{std::vector<double>(n - 1, 0.0), std::vector<double>(n - 1, 0.0)}; }

Contour automatic_contour(int n, const std::vector<double>& m_eff) {
  Contour c = real_contour(n);
  if (n == 2) {
    // Re(1 + w^2) >= 1 - c^2 + x^2 (cos 2 alpha - 2 c alpha) on the whole
    // homotopy, so c < 1 and cos 2 alpha > 2 c alpha keep the minor positive.
    const double m = std::abs(m_eff[0]);
    if (m == 0.0) return c;
    const double alpha = 0.3;
    const double shift = std::clamp(1.0 - 1.0 / (std::numbers::pi * m), 0.3, 0.95);
    c.angle[0] = alpha * sgn(m_eff[0]);
    c.shift[0] = shift * sgn(m_eff[0]);
    return c;
  }
  if (n == 3) {
    // Largest rotation keeping the sampled contour_margin above about 0.04,
    // as a function of the largest shift (equal angles on both axes).
    static constexpr std::array<std::pair<double, double>, 7> kAngleCap{
        {{0.3, 0.3}, {0.45, 0.25}, {0.6, 0.2}, {0.7, 0.15}, {0.8, 0.1}, {0.85, 0.06}, {0.9, 0.03}}};
    double cmax = 0.0;
    for (int l = 0; l < 2; ++l) {
      const double m = std::abs(m_eff[l]);
      if (m == 0.0) continue;
      c.shift[l] = std::clamp(1.0 - 1.0 / (std::numbers::pi * m), 0.3, 0.9) * sgn(m_eff[l]);
      cmax = std::max(cmax, std::abs(c.shift[l]));
    }
    if (cmax == 0.0) return c;
    double alpha = kAngleCap.back().second;
    for (std::size_t i = 1; i < kAngleCap.size(); ++i) {
      const auto [c0, a0] = kAngleCap[i - 1];
      const auto [c1, a1] = kAngleCap[i];
      if (cmax <= c1) {
        alpha = a0 + (a1 - a0) * std::max(0.0, cmax - c0) / (c1 - c0);
        break;
      }
    }
    for (int l = 0; l < 2; ++l) c.angle[l] = alpha * sgn(m_eff[l]);
    return c;
  }
  return c;
}

double contour_margin(int n, const Contour& c, int samples_per_axis) {
  ContourMap map(n, c);
  const int d = static_cast<int>(map.pairs.size());
  std::vector<double> axis;
  for (int k = 0; k < samples_per_axis; ++k) {
    const double th = -0.5 * std::numbers::pi + std::numbers::pi * (k + 0.5) / samples_per_axis;
    axis.push_back(std::tan(th));
  }
  double worst = 1e300;
  std::vector<int> idx(d, 0);
  std::vector<double> x(d);
  CMat g;
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= axis.size();
  for (std::size_t cnt = 0; cnt < total; ++cnt) {
    for (int i = 0; i < d; ++i) x[i] = axis[idx[i]];
    for (double h : {0.25, 0.5, 0.75, 1.0}) {
      map.build(x, g, h);
      for (int j = n - 1; j >= 1; --j) {
        const int w = n - j;
        cd sum = 0.0;
        double mag = 0.0;
        std::vector<int> rows(w);
        for (int r = 0; r < w; ++r) rows[r] = r;
        CMat block(w, w);
        while (true) {
          for (int r = 0; r < w; ++r)
            for (int q = 0; q < w; ++q) block(r, q) = g(rows[r], j + q);
          const cd det = block.determinant();
          sum += det * det;
          mag += std::norm(det);
          int pos = w - 1;
          while (pos >= 0 && rows[pos] == n - w + pos) --pos;
          if (pos < 0) break;
          ++rows[pos];
          for (int q = pos + 1; q < w; ++q) rows[q] = rows[q - 1] + 1;
        }
        worst = std::min(worst, sum.real() / mag);
      }
    }
    for (int i = 0; i < d; ++i) {
      if (++idx[i] < static_cast<int>(axis.size())) break;
      idx[i] = 0;
    }
  }
  return worst;
}

QuadratureSpec default_jacquet_spec(int n) {
  QuadratureSpec s;
  s.rel_tol = n == 2 ? 1e-9 : 1e-5;
  s.max_evals = 10'000'000;
  return s;
}

Integrand jacquet_integrand(const BoundaryFunction& f, const WhittakerCharacter& m_eff, const Contour& contour) {
  const int n = f.n();
  check_character(m_eff, n);
  const std::vector<double> m = m_eff.m;
  ContourMap map(n, contour);
  return [f, m, map, n](std::span<const double> q) {
    CMat g;
    const cd jac = map.build(q, g);
    cd phase = 0.0;
    for (int l = 0; l + 1 < n; ++l) phase += m[l] * g(l, l + 1);
    return f.eval(g) * std::exp(kI * kTwoPi * phase) * jac;
  };
}

QuadratureResult jacquet_integral_on(const BoundaryFunction& f, const WhittakerCharacter& m_eff,
                                     const QuadratureSpec& spec, const Contour& contour) {
  const int n = f.n();
  check_character(m_eff, n);
  require_chamber(f.param());
  const Integrand F = jacquet_integrand(f, m_eff, contour);
  QuadratureSpec s = spec;
  s.dim = n * (n - 1) / 2;
  s.frequencies.assign(s.dim, 0.0);
  s.scale.assign(s.dim, 1.0);
  for (int l = 0; l + 1 < n; ++l) {
    s.frequencies[l] = std::abs(m_eff.m[l]);
    s.scale[l] = 1.0 / std::max(1.0, std::abs(m_eff.m[l]));
  }
  // Tails decay like |x|^{Re(v_i - v_{i+1}) - 1} per axis, often slower than x^{-2}.
  s.power = std::max(s.power, 3);
  if (n != 3) return integrate_nd(F, s);
  // n = 3, u = (x, y, z) with z the corner entry. Completing squares in the
  // Gram minors 1 + x^2 + (z - xy)^2 and 1 + y^2 + z^2 factors both of them
  // for the spherical vector, at the cost of shearing one superdiagonal axis.
  // That axis must carry no oscillation, so the factored forms are used only
  // when its entry of m vanishes; otherwise z is measured from the ridge
  // z = xy of the first minor in units of its width sqrt(1 + x^2).
  const double m1 = m_eff.m[0], m2 = m_eff.m[1];
  if (m2 == 0.0) {
    // (x, w, t): z = xy + w sqrt(1+x^2), y = (t sqrt(1+w^2) - x w) / sqrt(1+x^2).
    return integrate_nd(
        [&F](std::span<const double> q) {
          const double x = q[0], w = q[1], t = q[2];
          const double sx = std::sqrt(1.0 + x * x), sw = std::sqrt(1.0 + w * w);
          const double y = (t * sw - x * w) / sx;
          const std::array<double, 3> p{x, y, x * y + w * sx};
          return F(p) * sw;
        },
        s);
  }
  if (m1 == 0.0) {
    // (t, y, e): z = e sqrt(1+y^2), x = (y e + t sqrt(1+e^2)) / sqrt(1+y^2).
    return integrate_nd(
        [&F](std::span<const double> q) {
          const double t = q[0], y = q[1], e = q[2];
          const double sy = std::sqrt(1.0 + y * y), se = std::sqrt(1.0 + e * e);
          const std::array<double, 3> p{(y * e + t * se) / sy, y, e * sy};
          return F(p) * se;
        },
        s);
  }
  return integrate_nd(
      [&F](std::span<const double> q) {
        const double x = q[0], y = q[1];
        const double sx = std::sqrt(1.0 + x * x);
        const std::array<double, 3> p{x, y, x * y + q[2] * sx};
        return F(p) * sx;
      },
      s);
}

QuadratureResult jacquet_integral(const BoundaryFunction& f, const WhittakerCharacter& m_eff,
                                  const QuadratureSpec& spec, ContourPolicy policy) {
  check_character(m_eff, f.n());
  require_chamber(f.param());
  if (policy == ContourPolicy::real_axis) return jacquet_integral_on(f, m_eff, spec, real_contour(f.n()));
  const Contour c = automatic_contour(f.n(), m_eff.m);
  if (c.trivial()) return jacquet_integral_on(f, m_eff, spec, c);
  try {
    return jacquet_integral_on(f, m_eff, spec, c);
  } catch (const ContourError&) {
    return jacquet_integral_on(f, m_eff, spec, real_contour(f.n()));
  }
}

cd a_power_rho_plus_v(const SpectralParam& p, std::span<const double> a) {
  const RhoVector r = rho(p.n);
  cd e = 0.0;
  for (int i = 0; i < p.n; ++i) e += (r[i] + p.v[i]) * std::log(a[i]);
  return std::exp(e);
}

std::vector<double> a_from_ratios(std::span<const double> r) {
  const int n = static_cast<int>(r.size()) + 1;
  std::vector<double> a(n, 1.0);
  for (int i = n - 2; i >= 0; --i) {
    if (!(r[i] > 0.0)) throw ConfigError("ratios must be positive");
    a[i] = a[i + 1] * r[i];
  }
  return a;
}

WhittakerValue whittaker_ak(const BoundaryFunction& f, const WhittakerCharacter& m, std::span<const double> a,
                            const Mat& k, const QuadratureSpec& spec, ContourPolicy policy) {
  const int n = f.n();
  check_character(m, n);
  if (static_cast<int>(a.size()) != n || k.rows() != n) throw DimensionMismatch("a and k must match f");
  require_chamber(f.param());
  const WhittakerCharacter m_eff = ad_a_m(a, m);
  // pi(k) f; the spherical vector is K-invariant, which saves a tree level.
  const bool identity = (k - Mat::Identity(n, n)).norm() == 0.0;
  const BoundaryFunction fk =
      (f.tag() == BoundaryTag::spherical || identity) ? f : act(GroupElement(k), f);
  WhittakerValue out;
  out.quad = jacquet_integral(fk, m_eff, spec, policy);
  out.prefactor = a_power_rho_plus_v(f.param(), a);
  out.value = out.prefactor * out.quad.value;
  return out;
}

WhittakerValue whittaker(const BoundaryFunction& f, const WhittakerCharacter& m, const GroupElement& g,
                         const QuadratureSpec& spec, ContourPolicy policy) {
  if (g.n() != f.n()) throw DimensionMismatch("g and f differ in dimension");
  const IwasawaUAK d = iwasawa_uak(g);
  std::vector<double> a(d.a.data(), d.a.data() + d.a.size());
  WhittakerValue out = whittaker_ak(f, m, a, d.k, spec, policy);
  double phase = 0.0;
  for (int i = 0; i + 1 < g.n(); ++i) phase += m.m[i] * d.u(i, i + 1);
  const cd psi = std::exp(kI * (kTwoPi * phase));
  out.prefactor *= psi;
  out.value *= psi;
  return out;
}

}  // namespace wh
