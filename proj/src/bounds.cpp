#include "whittaker/bounds.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace wh {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double weight(const std::vector<int>& l, const std::vector<double>& r) {
  double w = 1.0;
  for (std::size_t i = 0; i < l.size(); ++i) w *= std::pow(r[i], l[i]);
  return w;
}

// sup|f| on K times the degenerate integral of f_0^{Re v}: bounds |J(f, m)| for every m.
double majorant(const BoundaryFunction& f) {
  std::vector<cd> re;
  for (double x : f.param().re_v()) re.emplace_back(x);
  const SpectralParam p(re);
  QuadratureSpec s = default_jacquet_spec(p.n);
  s.rel_tol = 1e-6;
  const WhittakerCharacter zero(std::vector<double>(p.n - 1, 0.0), true);
  const double c = std::abs(jacquet_integral(BoundaryFunction::spherical(p), zero, s).value);
  const double sup = f.tag() == BoundaryTag::spherical ? 1.0 : sup_norm_on_K(f);
  return c * sup;
}

// Runs job(i) for i in [0, count) on a small pool; results are written by index.
template <class Job>
void parallel_for(std::size_t count, int threads, Job job) {
  int t = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  t = static_cast<int>(std::min<std::size_t>(t, count));
  if (t <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i; !failed && (i = next++) < count;) {
      try {
        job(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < t; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

struct RawPoint {
  std::vector<double> r;
  int k_index = 0;
  cd wh;
  double abs_j = 0.0;
  double abs_prefactor = 0.0;
  double quad_err = 0.0;
  long long n_evals = 0;
  bool converged = true;
};

RawPoint evaluate_point(const BoundaryFunction& f, const WhittakerCharacter& m, const std::vector<double>& r,
                        const Mat& k, int k_index, QuadratureSpec spec) {
  RawPoint out;
  out.r = r;
  out.k_index = k_index;
  const std::vector<double> a = a_from_ratios(r);
  out.abs_prefactor = std::abs(a_power_rho_plus_v(f.param(), a));
  try {
    const WhittakerValue w = whittaker_ak(f, m, a, k, spec);
    out.wh = w.value;
    out.abs_j = std::abs(w.quad.value);
    out.quad_err = w.quad.err_estimate;
    out.n_evals = w.quad.n_evals;
  } catch (const NotConverged& e) {
    out.wh = out.abs_prefactor * e.result.value;
    out.abs_j = std::abs(e.result.value);
    out.quad_err = e.result.err_estimate;
    out.n_evals = e.result.n_evals;
    out.converged = false;
  }
  return out;
}

ScanPoint to_scan_point(const RawPoint& p, double ratio) {
  ScanPoint s;
  s.r = p.r;
  s.k_index = p.k_index;
  s.wh = p.wh;
  s.abs_wh = p.abs_prefactor * p.abs_j;
  s.ratio = ratio;
  s.quad_err = p.abs_prefactor * p.quad_err;
  s.n_evals = p.n_evals;
  s.converged = p.converged;
  return s;
}

void summarize(ScanReport& rep, const std::function<bool(const ScanPoint&)>& in_shell) {
  rep.sup = 0.0;
  rep.argmax = 0;
  rep.shell_max = 0.0;
  rep.interior_max = 0.0;
  rep.not_converged = 0;
  for (std::size_t i = 0; i < rep.points.size(); ++i) {
    const ScanPoint& p = rep.points[i];
    if (!p.converged) ++rep.not_converged;
    if (p.ratio > rep.sup) {
      rep.sup = p.ratio;
      rep.argmax = i;
    }
    double& slot = in_shell(p) ? rep.shell_max : rep.interior_max;
    slot = std::max(slot, p.ratio);
  }
}

void check_ls(const std::vector<ExponentVector>& ls, int n) {
  for (const auto& l : ls) {
    if (l.size() != n - 1) throw DimensionMismatch("exponent vector must have n-1 entries");
  }
}

// a = (exp(t_1), ..., exp(t_{n-1}), 1) and the ratios r_i = a_i / a_{i+1}.
std::vector<double> a_from_logs(std::span<const double> t) {
  std::vector<double> a(t.size() + 1, 1.0);
  for (std::size_t i = 0; i < t.size(); ++i) a[i] = std::exp(t[i]);
  return a;
}

std::vector<double> ratios_of(const std::vector<double>& a) {
  std::vector<double> r(a.size() - 1);
  for (std::size_t i = 0; i + 1 < a.size(); ++i) r[i] = a[i] / a[i + 1];
  return r;
}

// sum over i < n of -2 rho_{n-1,i} t_i.
double log_measure_weight(std::span<const double> t) {
  const int n1 = static_cast<int>(t.size());
  const RhoVector r = rho(n1);
  double e = 0.0;
  for (int i = 0; i < n1; ++i) e -= 2.0 * r[i] * t[i];
  return e;
}

WeightedL2Report run_l2(const std::function<double(std::span<const double>)>& value, int dim,
                        const QuadratureSpec& outer, const L2Options& opt, double predicted,
                        const std::atomic<long long>& failures) {
  QuadratureSpec s = outer;
  s.dim = dim;
  s.frequencies.clear();
  s.scale.clear();
  const Integrand F = [&](std::span<const double> t) -> cd { return value(t); };
  WeightedL2Report rep;
  rep.boxes = expanding_box_integral(F, opt.radii, s);
  for (const auto& b : rep.boxes) rep.increments.push_back(b.increment);
  rep.predicted_power = predicted;

  // Along t_i = (n-i) tau, i.e. every r_i = e^tau; density against prod da'_i.
  const double tau0 = -opt.radii.back() / dim;
  std::vector<double> xs, ys;
  for (int j = 0; j <= 4; ++j) {
    const double tau = tau0 + j;
    std::vector<double> t(dim);
    double log_jac = 0.0;
    for (int i = 0; i < dim; ++i) {
      t[i] = (dim - i) * tau;
      log_jac += t[i];
    }
    const double v = value(t);
    if (!(v > 0.0)) continue;
    xs.push_back(tau);
    ys.push_back(std::log(v) - log_jac);
  }
  if (xs.size() >= 2) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    rep.fitted_power = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  } else {
    rep.fitted_power = std::nan("");
  }
  rep.verdict = failures > 0 ? Verdict::inconclusive : l2_verdict(rep.boxes);
  return rep;
}

// Exponent of r in a^{rho + Re v} prod r_i^{l_i} along the ray r_i = r.
double ray_exponent(const SpectralParam& p, const std::vector<int>& l) {
  const RhoVector r = rho(p.n);
  double e = 0.0;
  for (int i = 0; i < p.n; ++i) e += (p.n - 1 - i) * (r[i] + p.v[i].real());
  for (int x : l) e += x;
  return e;
}

// Exponent of r in a'^{-2 rho_{n-1}} / prod a'_i along the same ray.
double ray_measure_exponent(int n) {
  const RhoVector r = rho(n - 1);
  double e = 0.0;
  for (int i = 0; i < n - 1; ++i) e -= (n - 1 - i) * (2.0 * r[i] + 1.0);
  return e;
}

QuadratureSpec with_floor(QuadratureSpec s, double floor_abs, double w) {
  if (s.abs_tol <= 0.0) s.abs_tol = floor_abs / std::max(1.0, w);
  return s;
}

}  // namespace

ExponentVector::ExponentVector(std::vector<int> l_in) : l(std::move(l_in)) {
  for (int x : l) {
    if (x < 0) throw ConfigError("exponents must be nonnegative");
  }
}

void GridSpec::validate() const {
  if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max)) {
    throw ConfigError("grid needs 0 < r_min < r_max < infinity");
  }
  if (count < 2) throw ConfigError("grid needs at least two points per axis");
}

std::vector<double> GridSpec::axis() const {
  validate();
  std::vector<double> out(count);
  const double lo = std::log(r_min), hi = std::log(r_max);
  for (int i = 0; i < count; ++i) out[i] = std::exp(lo + (hi - lo) * i / (count - 1));
  out.front() = r_min;
  out.back() = r_max;
  return out;
}

GridSpec GridSpec::extended(double lo, double hi) const {
  validate();
  if (!(lo > 0.0) || !(hi > lo)) throw ConfigError("grid extension needs 0 < lo < hi");
  const double h = std::log(r_max / r_min) / (count - 1);
  const int below = std::max(0, static_cast<int>(std::ceil(std::log(r_min / lo) / h - 1e-9)));
  const int above = std::max(0, static_cast<int>(std::ceil(std::log(hi / r_max) / h - 1e-9)));
  GridSpec g = *this;
  g.r_min = r_min * std::exp(-below * h);
  g.r_max = r_max * std::exp(above * h);
  g.count = count + below + above;
  return g;
}

QuadratureSpec default_scan_spec(int n) {
  QuadratureSpec s = default_jacquet_spec(n);
  if (n >= 3) s.rel_tol = 1e-3;
  return s;
}

LadderCheck ladder_identity_check(const BoundaryFunction& f, const WhittakerCharacter& m, int i,
                                  std::span<const double> a, const QuadratureSpec& spec, double h) {
  const int n = f.n();
  if (i < 0 || i + 1 >= n) throw DimensionMismatch("superdiagonal index out of range");
  const Mat k = Mat::Identity(n, n);
  LadderCheck out;
  out.wh = whittaker_ak(f, m, a, k, spec).value;
  out.wh_x = whittaker_ak(lie_derivative(i, f, h), m, a, k, spec).value;
  const cd factor = kTwoPi * m.m[i] * (a[i] / a[i + 1]);
  out.expected_magnitude = std::abs(factor) * std::abs(out.wh);
  out.rel_error = std::abs(std::abs(out.wh_x) / out.expected_magnitude - 1.0);
  out.phase = out.wh_x / (factor * out.wh);
  return out;
}

std::vector<ScanReport> theoremC_ratio_scan(const BoundaryFunction& f, const WhittakerCharacter& m,
                                            const std::vector<ExponentVector>& ls, const GridSpec& grid,
                                            const QuadratureSpec& spec, const ScanOptions& opt) {
  const int n = f.n();
  check_ls(ls, n);
  require_chamber(f.param());
  const std::vector<double> axis = grid.axis();
  std::vector<Mat> ks = grid.k_samples;
  if (ks.empty()) ks.push_back(Mat::Identity(n, n));

  const int d = n - 1;
  std::size_t cells = 1;
  for (int i = 0; i < d; ++i) cells *= axis.size();
  const double floor_abs = spec.abs_tol > 0.0 ? 0.0 : opt.abs_floor * majorant(f);

  std::vector<RawPoint> raw(cells * ks.size());
  parallel_for(raw.size(), opt.threads, [&](std::size_t idx) {
    const std::size_t kidx = idx % ks.size();
    std::size_t c = idx / ks.size();
    std::vector<double> r(d);
    for (int i = 0; i < d; ++i) {
      r[i] = axis[c % axis.size()];
      c /= axis.size();
    }
    double wmax = 0.0;
    for (const auto& l : ls) wmax = std::max(wmax, weight(l.l, r));
    raw[idx] = evaluate_point(f, m, r, ks[kidx], static_cast<int>(kidx), with_floor(spec, floor_abs, wmax));
  });

  const double lo = std::log(grid.r_min), span = std::log(grid.r_max) - lo;
  auto in_shell = [&](const ScanPoint& p) {
    for (double x : p.r) {
      const double frac = (std::log(x) - lo) / span;
      if (frac < 0.1 + 1e-12 || frac > 0.9 - 1e-12) return true;
    }
    return false;
  };

  std::vector<ScanReport> out;
  for (const auto& l : ls) {
    ScanReport rep;
    for (const RawPoint& p : raw) rep.points.push_back(to_scan_point(p, p.abs_j * weight(l.l, p.r)));
    summarize(rep, in_shell);
    out.push_back(std::move(rep));
  }
  return out;
}

ScanReport theoremC_ratio_scan(const BoundaryFunction& f, const WhittakerCharacter& m, const ExponentVector& l,
                               const GridSpec& grid, const QuadratureSpec& spec, const ScanOptions& opt) {
  return theoremC_ratio_scan(f, m, std::vector<ExponentVector>{l}, grid, spec, opt).front();
}

ScanReport siegel_decay_check(const BoundaryFunction& f, const WhittakerCharacter& m, double t,
                              const ExponentVector& l, const std::vector<double>& ray, const QuadratureSpec& spec,
                              const ScanOptions& opt) {
  const int n = f.n();
  check_ls({l}, n);
  require_chamber(f.param());
  if (!(t > 0.0)) throw ConfigError("Siegel parameter t must be positive");
  for (double r : ray) {
    if (!(r >= t)) throw ConfigError("ray points must satisfy r >= t");
  }
  const Mat k = Mat::Identity(n, n);
  std::vector<RawPoint> raw(ray.size());
  parallel_for(ray.size(), opt.threads, [&](std::size_t i) {
    raw[i] = evaluate_point(f, m, std::vector<double>(n - 1, ray[i]), k, 0, spec);
  });
  ScanReport rep;
  for (const RawPoint& p : raw) rep.points.push_back(to_scan_point(p, p.abs_prefactor * p.abs_j * weight(l.l, p.r)));
  summarize(rep, [](const ScanPoint&) { return false; });
  return rep;
}

bool strictly_decreasing(const ScanReport& r) {
  if (r.not_converged > 0) return false;
  for (std::size_t i = 1; i < r.points.size(); ++i) {
    if (!(r.points[i].ratio < r.points[i - 1].ratio)) return false;
  }
  return true;
}

CFunctionCheck cfunction_limit(const SpectralParam& p, const WhittakerCharacter& m, const QuadratureSpec& spec,
                               double r_small) {
  require_chamber(p);
  if (m.size() != p.n - 1) throw DimensionMismatch("character must have n-1 entries");
  const BoundaryFunction f0 = BoundaryFunction::spherical(p);
  CFunctionCheck out;
  out.direct = jacquet_integral(f0, WhittakerCharacter(std::vector<double>(p.n - 1, 0.0), true), spec);
  const std::vector<double> a = a_from_ratios(std::vector<double>(p.n - 1, r_small));
  out.at_small_a = whittaker_ak(f0, m, a, Mat::Identity(p.n, p.n), spec);
  out.limit = out.at_small_a.value / a_power_rho_plus_v(p, a);
  out.rel_diff = std::abs(out.limit / out.direct.value - 1.0);
  return out;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::converged:
      return "converged";
    case Verdict::diverged:
      return "diverged";
    default:
      return "inconclusive";
  }
}

Verdict l2_verdict(const std::vector<BoxPartial>& boxes) {
  if (boxes.size() < 3) return Verdict::inconclusive;
  std::vector<double> q;
  for (std::size_t k = 2; k < boxes.size(); ++k) {
    const double prev = boxes[k - 1].increment;
    q.push_back(prev > 0.0 ? boxes[k].increment / prev : (boxes[k].increment > 0.0 ? INFINITY : 0.0));
  }
  int run = 0;
  for (double x : q) {
    run = x >= 0.9 ? run + 1 : 0;
    if (run >= 3) return Verdict::diverged;
  }
  return q.back() < 0.9 ? Verdict::converged : Verdict::inconclusive;
}

std::vector<Mat> k_sub_samples(int n, int angles) {
  if (n < 2) throw DimensionMismatch("k_sub_samples needs n >= 2");
  std::vector<Mat> out;
  for (const Mat& k : sample_K(n - 1, angles)) out.push_back(embed_gl(GroupElement(k), n).matrix());
  return out;
}

WeightedL2Report weighted_l2_theoremA(const BoundaryFunction& f, const WhittakerCharacter& m,
                                      const ExponentVector& l, const QuadratureSpec& outer,
                                      const QuadratureSpec& inner, const L2Options& opt) {
  const int n = f.n();
  check_ls({l}, n);
  require_chamber(f.param());
  const double floor_abs = inner.abs_tol > 0.0 ? 0.0 : opt.inner_abs_floor * majorant(f);
  const Mat k = Mat::Identity(n, n);
  std::atomic<long long> failures{0};
  auto value = [&](std::span<const double> t) {
    const std::vector<double> a = a_from_logs(t);
    const std::vector<double> r = ratios_of(a);
    const double w = weight(l.l, r);
    const RawPoint p = evaluate_point(f, m, r, k, 0, with_floor(inner, floor_abs, w));
    if (!p.converged) ++failures;
    const double x = w * p.abs_prefactor * p.abs_j;
    return x * x * std::exp(log_measure_weight(t));
  };
  const double predicted = 2.0 * ray_exponent(f.param(), l.l) + ray_measure_exponent(n);
  return run_l2(value, n - 1, outer, opt, predicted, failures);
}

WeightedL2Report weighted_l2_theoremB(const BoundaryFunction& f, const WhittakerCharacter& m, double epsilon,
                                      const QuadratureSpec& outer, const QuadratureSpec& inner,
                                      const L2Options& opt) {
  const int n = f.n();
  require_chamber(f.param());
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be nonnegative");
  const double floor_abs = inner.abs_tol > 0.0 ? 0.0 : opt.inner_abs_floor * majorant(f);
  std::vector<Mat> ks;
  if (f.tag() == BoundaryTag::spherical) {
    ks.push_back(Mat::Identity(n, n));
  } else {
    ks = k_sub_samples(n, n == 2 ? 1 : opt.angles);
  }
  std::atomic<long long> failures{0};
  auto value = [&](std::span<const double> t) {
    const std::vector<double> a = a_from_logs(t);
    const std::vector<double> r = ratios_of(a);
    double sum = 0.0;
    for (std::size_t j = 0; j < ks.size(); ++j) {
      const RawPoint p = evaluate_point(f, m, r, ks[j], static_cast<int>(j), with_floor(inner, floor_abs, 1.0));
      if (!p.converged) ++failures;
      const double x = p.abs_prefactor * p.abs_j;
      sum += x * x;
    }
    double log_det = 0.0;
    for (double x : t) log_det += x;
    return sum / ks.size() * std::exp(epsilon * log_det + log_measure_weight(t));
  };
  double predicted = 2.0 * ray_exponent(f.param(), std::vector<int>(n - 1, 0)) + ray_measure_exponent(n);
  for (int i = 0; i < n - 1; ++i) predicted += epsilon * (n - 1 - i);
  return run_l2(value, n - 1, outer, opt, predicted, failures);
}

}  // namespace wh
