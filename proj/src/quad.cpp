#include "whittaker/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

namespace wh {

void QuadratureSpec::validate() const {
  auto bad = [](const std::string& msg) { throw ConfigError("quadrature spec: " + msg); };
  if (dim < 1 || dim > 6) bad("dim must lie in 1..6");
  if (!(rel_tol > 1e-14 && rel_tol < 1e-1)) bad("rel_tol must lie in (1e-14, 1e-1)");
  if (!(abs_tol >= 0.0)) bad("abs_tol must be nonnegative");
  if (base_panels < 4) bad("base_panels must be at least 4");
  if (max_depth < 0 || max_depth > 30) bad("max_depth must lie in 0..30");
  if (max_evals < 1) bad("max_evals must be positive");
  if (power != 1 && power != 3 && power != 5) bad("power must be 1, 3 or 5");
  if (!frequencies.empty() && static_cast<int>(frequencies.size()) != dim) bad("frequencies must have dim entries");
  for (double w : frequencies) {
    if (!(w >= 0.0) || !std::isfinite(w)) bad("frequencies must be finite and nonnegative");
  }
  if (!scale.empty() && static_cast<int>(scale.size()) != dim) bad("scale must have dim entries");
  for (double s : scale) {
    if (!(s > 0.0) || !std::isfinite(s)) bad("scale entries must be positive");
  }
  if (mapping == Mapping::none) {
    if (static_cast<int>(lower.size()) != dim || static_cast<int>(upper.size()) != dim) {
      bad("mapping none needs lower and upper bounds");
    }
    for (int i = 0; i < dim; ++i) {
      if (!(lower[i] < upper[i]) || !std::isfinite(lower[i]) || !std::isfinite(upper[i])) bad("empty or infinite box");
    }
  }
}

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Region {
  std::array<double, 6> center{};
  std::array<double, 6> half{};
  int depth = 0;
  long long id = 0;
  cd value = 0.0;
  double err = 0.0;
  int split_axis = 0;
};

struct WorseFirst {
  bool operator()(const Region& a, const Region& b) const {
    if (a.err != b.err) return a.err < b.err;
    return a.id > b.id;
  }
};

// Integrand pulled back to the parameter box, including the Jacobian.
class Pullback {
 public:
  Pullback(const Integrand& f, const QuadratureSpec& spec) : f_(f), spec_(spec), x_(spec.dim) {}

  cd operator()(const double* t) {
    double jac = 1.0;
    for (int i = 0; i < spec_.dim; ++i) {
      if (spec_.mapping == Mapping::tangent) {
        const double s = spec_.scale.empty() ? 1.0 : spec_.scale[i];
        double th = t[i];
        if (spec_.power > 1) {
          // u in [0, pi]; theta = -pi/2 + pi F(u) / F(pi) with F' = sin^m.
          const double u = t[i] + 0.5 * std::numbers::pi;
          const double su = std::sin(u);
          double F, Fpi, dF;
          if (spec_.power == 3) {
            F = 0.5 * u - 0.25 * std::sin(2.0 * u);
            Fpi = 0.5 * std::numbers::pi;
            dF = su * su;
          } else {
            F = 0.375 * u - 0.25 * std::sin(2.0 * u) + std::sin(4.0 * u) / 32.0;
            Fpi = 0.375 * std::numbers::pi;
            dF = su * su * su * su;
          }
          th = -0.5 * std::numbers::pi + std::numbers::pi * F / Fpi;
          jac *= std::numbers::pi * dF / Fpi;
        }
        const double c = std::cos(th);
        x_[i] = s * std::tan(th);
        jac *= s / (c * c);
      } else {
        x_[i] = t[i];
      }
    }
    ++evals;
    return f_(std::span<const double>(x_.data(), x_.size())) * jac;
  }

  long long evals = 0;

 private:
  const Integrand& f_;
  const QuadratureSpec& spec_;
  std::vector<double> x_;
};

void apply_gk15(Pullback& g, Region& r) {
  const double c = r.center[0], h = r.half[0];
  double t;
  t = c;
  const cd fc = g(&t);
  cd kr = fc * kWgk[7];
  cd ga = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    double a = c - h * kXgk[j], b = c + h * kXgk[j];
    const cd s = g(&a) + g(&b);
    kr += kWgk[j] * s;
    if (j % 2 == 1) ga += kWg[j / 2] * s;
  }
  r.value = kr * h;
  r.err = std::abs((kr - ga) * h);
  r.split_axis = 0;
}

void apply_genz_malik(Pullback& g, Region& r, int d) {
  const double l2 = std::sqrt(9.0 / 70.0), l3 = std::sqrt(9.0 / 10.0), l4 = std::sqrt(9.0 / 10.0),
               l5 = std::sqrt(9.0 / 19.0);
  const double dd = d;
  const double w1 = (12824.0 - 9120.0 * dd + 400.0 * dd * dd) / 19683.0;
  const double w2 = 980.0 / 6561.0;
  const double w3 = (1820.0 - 400.0 * dd) / 19683.0;
  const double w4 = 200.0 / 19683.0;
  const double w5 = 6859.0 / 19683.0 / std::ldexp(1.0, d);
  const double v1 = (729.0 - 950.0 * dd + 50.0 * dd * dd) / 729.0;
  const double v2 = 245.0 / 486.0;
  const double v3 = (265.0 - 100.0 * dd) / 1458.0;
  const double v4 = 25.0 / 729.0;

  std::array<double, 6> p = r.center;
  const cd f0 = g(p.data());
  cd s2 = 0.0, s3 = 0.0, s4 = 0.0, s5 = 0.0;
  double best = -1.0;
  int axis = 0;
  for (int i = 0; i < d; ++i) {
    p[i] = r.center[i] - l2 * r.half[i];
    const cd a2 = g(p.data());
    p[i] = r.center[i] + l2 * r.half[i];
    const cd b2 = g(p.data());
    p[i] = r.center[i] - l3 * r.half[i];
    const cd a3 = g(p.data());
    p[i] = r.center[i] + l3 * r.half[i];
    const cd b3 = g(p.data());
    p[i] = r.center[i];
    s2 += a2 + b2;
    s3 += a3 + b3;
    const double diff = std::abs(a2 + b2 - 2.0 * f0 - (l2 * l2 / (l3 * l3)) * (a3 + b3 - 2.0 * f0));
    // Prefer the wider axis on ties so flat integrands still get bisected evenly.
    if (diff > best * (1.0 + 1e-12) || (diff >= best * (1.0 - 1e-12) && r.half[i] > r.half[axis])) {
      best = diff;
      axis = i;
    }
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      for (int si = -1; si <= 1; si += 2) {
        for (int sj = -1; sj <= 1; sj += 2) {
          p[i] = r.center[i] + si * l4 * r.half[i];
          p[j] = r.center[j] + sj * l4 * r.half[j];
          s4 += g(p.data());
        }
      }
      p[i] = r.center[i];
      p[j] = r.center[j];
    }
  }
  for (int mask = 0; mask < (1 << d); ++mask) {
    for (int i = 0; i < d; ++i) p[i] = r.center[i] + ((mask >> i & 1) ? l5 : -l5) * r.half[i];
    s5 += g(p.data());
  }
  double vol = 1.0;
  for (int i = 0; i < d; ++i) vol *= 2.0 * r.half[i];
  const cd hi = vol * (w1 * f0 + w2 * s2 + w3 * s3 + w4 * s4 + w5 * s5);
  const cd lo = vol * (v1 * f0 + v2 * s2 + v3 * s3 + v4 * s4);
  r.value = hi;
  r.err = std::abs(hi - lo);
  r.split_axis = axis;
}

// Pairwise summation in a fixed order.
template <typename T>
T pairwise_sum(const std::vector<T>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo == 0) return T{};
  if (hi - lo == 1) return v[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

int initial_panels(const QuadratureSpec& spec, int axis) {
  int n = spec.base_panels;
  if (!spec.frequencies.empty() && spec.mapping == Mapping::tangent) {
    const double s = spec.scale.empty() ? 1.0 : spec.scale[axis];
    const double want = std::ceil(2.0 * spec.base_panels * spec.frequencies[axis] * s);
    n = std::max(n, static_cast<int>(std::min(want, 32.0)));
  } else if (!spec.frequencies.empty()) {
    const double width = spec.upper[axis] - spec.lower[axis];
    const double want = std::ceil(2.0 * spec.frequencies[axis] * width);
    n = std::max(n, static_cast<int>(std::min(want, 64.0)));
  }
  return n;
}

QuadratureResult run(const Integrand& f, const QuadratureSpec& spec) {
  spec.validate();
  const int d = spec.dim;
  Pullback g(f, spec);
  auto evaluate = [&](Region& r) {
    if (d == 1) {
      apply_gk15(g, r);
    } else {
      apply_genz_malik(g, r, d);
    }
  };

  std::vector<int> panels(d);
  std::vector<double> lo(d), width(d);
  long long n_initial = 1;
  for (int i = 0; i < d; ++i) {
    panels[i] = initial_panels(spec, i);
    n_initial *= panels[i];
    if (spec.mapping == Mapping::tangent) {
      lo[i] = -0.5 * std::numbers::pi;
      width[i] = std::numbers::pi / panels[i];
    } else {
      lo[i] = spec.lower[i];
      width[i] = (spec.upper[i] - spec.lower[i]) / panels[i];
    }
  }

  std::priority_queue<Region, std::vector<Region>, WorseFirst> heap;
  std::vector<Region> finished;
  long long next_id = 0;
  cd total = 0.0;
  double total_err = 0.0;
  std::vector<int> idx(d, 0);
  for (long long c = 0; c < n_initial; ++c) {
    Region r;
    for (int i = 0; i < d; ++i) {
      r.center[i] = lo[i] + (idx[i] + 0.5) * width[i];
      r.half[i] = 0.5 * width[i];
    }
    r.id = next_id++;
    evaluate(r);
    total += r.value;
    total_err += r.err;
    heap.push(r);
    for (int i = 0; i < d; ++i) {
      if (++idx[i] < panels[i]) break;
      idx[i] = 0;
    }
  }

  auto target = [&] { return std::max(spec.rel_tol * std::abs(total), spec.abs_tol); };
  bool budget_hit = false;
  long long iter = 0;
  while (!heap.empty() && total_err > target()) {
    if (g.evals >= spec.max_evals) {
      budget_hit = true;
      break;
    }
    Region r = heap.top();
    heap.pop();
    if (r.depth >= spec.max_depth) {
      finished.push_back(r);
      continue;
    }
    total -= r.value;
    total_err -= r.err;
    const int ax = r.split_axis;
    for (int side = -1; side <= 1; side += 2) {
      Region child = r;
      child.half[ax] = 0.5 * r.half[ax];
      child.center[ax] = r.center[ax] + side * child.half[ax];
      child.depth = r.depth + 1;
      child.id = next_id++;
      evaluate(child);
      total += child.value;
      total_err += child.err;
      heap.push(child);
    }
    // Resynchronize the running sums so cancellation cannot accumulate.
    if (++iter % 4096 == 0) {
      total = 0.0;
      total_err = 0.0;
      auto copy = heap;
      while (!copy.empty()) {
        total += copy.top().value;
        total_err += copy.top().err;
        copy.pop();
      }
      for (const Region& fr : finished) {
        total += fr.value;
        total_err += fr.err;
      }
    }
  }

  while (!heap.empty()) {
    finished.push_back(heap.top());
    heap.pop();
  }
  std::sort(finished.begin(), finished.end(), [](const Region& a, const Region& b) { return a.id < b.id; });
  std::vector<cd> vals;
  std::vector<double> errs;
  vals.reserve(finished.size());
  errs.reserve(finished.size());
  for (const Region& r : finished) {
    vals.push_back(r.value);
    errs.push_back(r.err);
  }
  QuadratureResult out;
  out.value = pairwise_sum(vals, 0, vals.size());
  out.err_estimate = pairwise_sum(errs, 0, errs.size());
  out.n_evals = g.evals;
  const double tol = std::max(spec.rel_tol * std::max(std::abs(out.value), 1e-300), spec.abs_tol);
  out.converged = !budget_hit && std::isfinite(out.err_estimate) && out.err_estimate <= tol;
  return out;
}

void throw_unless_converged(const QuadratureResult& r) {
  if (!r.converged) {
    std::ostringstream os;
    os << "quadrature did not converge: value " << r.value << ", error estimate " << r.err_estimate << " after "
       << r.n_evals << " evaluations";
    throw NotConverged(os.str(), r);
  }
}

}  // namespace

QuadratureResult integrate_nd_unchecked(const Integrand& f, const QuadratureSpec& spec) { return run(f, spec); }

QuadratureResult integrate_nd(const Integrand& f, const QuadratureSpec& spec) {
  QuadratureResult r = run(f, spec);
  throw_unless_converged(r);
  return r;
}

std::vector<BoxPartial> expanding_box_integral(const Integrand& f, const std::vector<double>& radii,
                                               const QuadratureSpec& spec) {
  const int d = spec.dim;
  std::vector<BoxPartial> out;
  double prev_r = 0.0;
  double cumulative = 0.0;
  double cumulative_err = 0.0;
  for (double R : radii) {
    if (!(R > prev_r)) throw ConfigError("box radii must be positive and increasing");
    double shell = 0.0;
    long long evals = 0;
    // Shell piece i: |x_j| <= prev_r for j < i, prev_r <= |x_i| <= R, |x_j| <= R for j > i.
    for (int i = 0; i < d; ++i) {
      for (int side = -1; side <= 1; side += 2) {
        QuadratureSpec s = spec;
        s.mapping = Mapping::none;
        s.lower.assign(d, 0.0);
        s.upper.assign(d, 0.0);
        bool empty = false;
        for (int j = 0; j < d; ++j) {
          if (j < i) {
            if (prev_r == 0.0) empty = true;
            s.lower[j] = -prev_r;
            s.upper[j] = prev_r;
          } else if (j == i) {
            s.lower[j] = side < 0 ? -R : prev_r;
            s.upper[j] = side < 0 ? -prev_r : R;
          } else {
            s.lower[j] = -R;
            s.upper[j] = R;
          }
        }
        if (empty) continue;
        // Outer shells only need to be resolved relative to the running total.
        s.abs_tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(cumulative) / (2 * d));
        const QuadratureResult q = integrate_nd(f, s);
        shell += q.value.real();
        cumulative_err += q.err_estimate;
        evals += q.n_evals;
      }
    }
    BoxPartial p;
    p.radius = R;
    p.increment = shell;
    cumulative += shell;
    p.value = cumulative;
    p.err_estimate = cumulative_err;
    p.n_evals = evals;
    out.push_back(p);
    prev_r = R;
  }
  return out;
}

QuadratureResult integrate_contour(const HolomorphicIntegrand& f, const std::vector<double>& shift,
                                   const std::vector<double>& angle, const QuadratureSpec& spec) {
  const int d = spec.dim;
  if (static_cast<int>(shift.size()) != d || static_cast<int>(angle.size()) != d) {
    throw ConfigError("contour shift and angle need one entry per dimension");
  }
  for (double a : angle) {
    if (!(a >= 0.0 && a <= 0.25 * std::numbers::pi)) throw ConfigError("contour angle must lie in [0, pi/4]");
  }
  const cd I(0.0, 1.0);
  std::vector<cd> z(d);
  auto pulled = [&](std::span<const double> t) {
    cd jac = 1.0;
    for (int j = 0; j < d; ++j) {
      const double s = t[j];
      const double q = std::sqrt(1.0 + s * s);
      const cd rot = std::exp(I * (angle[j] * s / q));
      z[j] = I * shift[j] + s * rot;
      jac *= rot * (1.0 + I * angle[j] * s / (q * q * q));
    }
    return f(std::span<const cd>(z.data(), z.size())) * jac;
  };
  QuadratureSpec s = spec;
  s.frequencies.clear();
  return integrate_nd(pulled, s);
}

QuadratureResult integrate_contour_1d(const std::function<cd(cd)>& f, double shift, double angle,
                                      const QuadratureSpec& spec) {
  if (spec.dim != 1) throw ConfigError("contour integration here is one-dimensional");
  return integrate_contour([&](std::span<const cd> z) { return f(z[0]); }, {shift}, {angle}, spec);
}

std::vector<SelfTestCase> quad_selftest() {
  constexpr double pi = std::numbers::pi;
  const double tol = 1e-6;
  std::vector<SelfTestCase> out;
  auto record = [&](std::string name, const QuadratureResult& q, cd oracle) {
    SelfTestCase c;
    c.name = std::move(name);
    c.value = q.value;
    c.oracle = oracle;
    c.rel_err = std::abs(q.value - oracle) / std::abs(oracle);
    c.tolerance = tol;
    c.n_evals = q.n_evals;
    c.pass = q.converged && c.rel_err < tol;
    out.push_back(c);
  };
  QuadratureSpec spec;
  spec.rel_tol = 1e-11;

  record("lorentzian", integrate_nd_unchecked([](std::span<const double> x) { return cd(1.0 / (1.0 + x[0] * x[0])); }, spec),
         pi);

  for (double w : {1.0, 4.0, 16.0}) {
    // Shift toward the pole at i so the peak of the integrand is comparable
    // to the (exponentially small) answer.
    const double shift = std::min(1.0 - 1.0 / (pi * w), 0.98);
    auto f = [w](cd x) { return std::exp(cd(0.0, 2.0 * pi * w) * x) / (1.0 + x * x); };
    QuadratureResult q;
    try {
      q = integrate_contour_1d(f, shift, pi / 8, spec);
    } catch (const NotConverged& e) {
      q = e.result;
    }
    record("fourier_lorentzian_w" + std::to_string(static_cast<int>(w)), q, pi * std::exp(-2.0 * pi * w));
  }

  {
    QuadratureSpec g = spec;
    auto partials = expanding_box_integral([](std::span<const double> x) { return cd(std::exp(-x[0] * x[0])); },
                                           {1.0, 2.0, 4.0, 8.0}, g);
    QuadratureResult q;
    q.value = partials.back().value;
    q.err_estimate = partials.back().err_estimate;
    for (const auto& p : partials) q.n_evals += p.n_evals;
    q.converged = true;
    record("gaussian", q, std::sqrt(pi));
  }

  for (double s : {0.8, 1.5, 2.25}) {
    QuadratureSpec g = spec;
    g.power = s < 1.0 ? 3 : 1;
    auto q = integrate_nd_unchecked([s](std::span<const double> x) { return cd(std::pow(1.0 + x[0] * x[0], -s)); }, g);
    std::string name = "gamma_ratio_s" + std::to_string(s);
    name.erase(name.find_last_not_of('0') + 1);
    record(name, q, std::sqrt(pi) * std::tgamma(s - 0.5) / std::tgamma(s));
  }

  {
    QuadratureSpec g = spec;
    g.dim = 2;
    g.rel_tol = 1e-9;
    auto f = [](std::span<const cd> z) {
      return std::exp(cd(0.0, 2.0 * pi) * z[1]) / ((1.0 + z[0] * z[0]) * (1.0 + z[1] * z[1]));
    };
    QuadratureResult q;
    try {
      q = integrate_contour(f, {0.0, 1.0 - 1.0 / pi}, {0.0, pi / 8}, g);
    } catch (const NotConverged& e) {
      q = e.result;
    }
    record("separable_2d", q, pi * pi * std::exp(-2.0 * pi));
  }
  return out;
}

}  // namespace wh
