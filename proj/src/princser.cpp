#include "whittaker/princser.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wh {

std::vector<double> RhoVector::values() const {
  std::vector<double> out(twice.size());
  for (std::size_t i = 0; i < twice.size(); ++i) out[i] = 0.5 * twice[i];
  return out;
}

RhoVector rho(int n) {
  if (n < 1) throw DimensionMismatch("rho needs n >= 1");
  RhoVector r;
  for (int i = 0; i < n; ++i) r.twice.push_back(n - 1 - 2 * i);
  return r;
}

RhoVector rho_sub(int n) {
  if (n < 2) throw DimensionMismatch("rho_sub needs n >= 2");
  return rho(n - 1);
}

SpectralParam::SpectralParam(std::vector<cd> v_in, std::vector<int> sigma_in)
    : n(static_cast<int>(v_in.size())), v(std::move(v_in)), sigma(std::move(sigma_in)) {
  if (n < 1 || n > kMaxDim) throw DimensionMismatch("spectral parameter dimension out of range");
  if (sigma.size() != v.size()) throw DimensionMismatch("v and sigma differ in length");
  for (int s : sigma) {
    if (s != 1 && s != -1) throw ConfigError("sigma entries must be +1 or -1");
  }
}

SpectralParam::SpectralParam(std::vector<cd> v_in)
    : SpectralParam(v_in, std::vector<int>(v_in.size(), 1)) {}

bool SpectralParam::trivial_sigma() const {
  return std::all_of(sigma.begin(), sigma.end(), [](int s) { return s == 1; });
}

std::vector<double> SpectralParam::re_v() const {
  std::vector<double> out;
  for (const cd& z : v) out.push_back(z.real());
  return out;
}

bool in_open_negative_chamber(const SpectralParam& p) {
  for (int i = 0; i + 1 < p.n; ++i) {
    if (!(p.v[i].real() < p.v[i + 1].real())) return false;
  }
  return true;
}

void require_chamber(const SpectralParam& p) {
  if (!in_open_negative_chamber(p)) {
    throw ChamberViolation("Re v must be strictly increasing for the Jacquet integral to converge");
  }
}

struct BoundaryFunction::Node {
  SpectralParam param;
  BoundaryTag tag;

  Node(SpectralParam p, BoundaryTag t) : param(std::move(p)), tag(t) {}
  virtual ~Node() = default;
  virtual cd eval(const CMat& g) const = 0;
};

namespace {

using Node = BoundaryFunction::Node;

// rho - v, precomputed per node.
std::vector<cd> rho_minus_v(const SpectralParam& p) {
  const RhoVector r = rho(p.n);
  std::vector<cd> out(p.n);
  for (int i = 0; i < p.n; ++i) out[i] = r[i] - p.v[i];
  return out;
}

cd cocycle_factor(const std::vector<cd>& exps, const CVec& log_a) {
  cd e = 0.0;
  for (std::size_t i = 0; i < exps.size(); ++i) e += exps[i] * log_a(i);
  return std::exp(e);
}

struct SphericalNode final : Node {
  std::vector<cd> exps;
  explicit SphericalNode(SpectralParam p) : Node(std::move(p), BoundaryTag::spherical), exps(rho_minus_v(param)) {}
  cd eval(const CMat& g) const override { return cocycle_factor(exps, holomorphic_opposite_kan(g, false).log_a); }
};

struct CustomNode final : Node {
  std::function<cd(const CMat&)> phi;
  std::vector<cd> exps;
  CustomNode(SpectralParam p, std::function<cd(const CMat&)> f)
      : Node(std::move(p), BoundaryTag::custom), phi(std::move(f)), exps(rho_minus_v(param)) {}
  cd eval(const CMat& g) const override {
    const auto d = holomorphic_opposite_kan(g, true);
    return cocycle_factor(exps, d.log_a) * phi(d.k);
  }
};

struct TranslateNode final : Node {
  CMat g0_inv;
  BoundaryFunction base;
  TranslateNode(const Mat& inv, BoundaryFunction b)
      : Node(b.param(), BoundaryTag::translate), g0_inv(inv.cast<cd>()), base(std::move(b)) {}
  cd eval(const CMat& g) const override { return base.eval(CMat(g0_inv * g)); }
};

struct LieNode final : Node {
  int index;
  double h;
  BoundaryFunction base;
  LieNode(int i, double step, BoundaryFunction b)
      : Node(b.param(), BoundaryTag::lie_derivative), index(i), h(step), base(std::move(b)) {}

  // F(t) = f(exp(-t E) g); exp(-t E) g subtracts t * row (i+1) from row i.
  cd shifted(const CMat& g, double t) const {
    CMat x = g;
    x.row(index) -= t * g.row(index + 1);
    return base.eval(x);
  }
  cd central(const CMat& g, double step) const {
    return (shifted(g, step) - shifted(g, -step)) / (2.0 * step);
  }
  cd eval(const CMat& g) const override {
    return (4.0 * central(g, 0.5 * h) - central(g, h)) / 3.0;
  }
};

struct LinCombNode final : Node {
  std::vector<std::pair<cd, BoundaryFunction>> terms;
  LinCombNode(SpectralParam p, std::vector<std::pair<cd, BoundaryFunction>> t)
      : Node(std::move(p), BoundaryTag::linear_combination), terms(std::move(t)) {}
  cd eval(const CMat& g) const override {
    cd s = 0.0;
    for (const auto& [c, f] : terms) s += c * f.eval(g);
    return s;
  }
};

bool same_param(const SpectralParam& a, const SpectralParam& b) { return a.v == b.v && a.sigma == b.sigma; }

}  // namespace

BoundaryFunction BoundaryFunction::spherical(const SpectralParam& p) {
  if (!p.trivial_sigma()) throw ConfigError("the spherical vector requires trivial sigma");
  return BoundaryFunction(std::make_shared<SphericalNode>(p));
}

BoundaryFunction BoundaryFunction::custom(const SpectralParam& p, std::function<cd(const CMat&)> phi) {
  return BoundaryFunction(std::make_shared<CustomNode>(p, std::move(phi)));
}

BoundaryFunction BoundaryFunction::k_finite(const SpectralParam& p, std::vector<Vec> weights,
                                            std::vector<int> powers) {
  if (static_cast<int>(weights.size()) != p.n || static_cast<int>(powers.size()) != p.n) {
    throw DimensionMismatch("k_finite needs one weight vector and one power per column");
  }
  for (int j = 0; j < p.n; ++j) {
    if (weights[j].size() != p.n) throw DimensionMismatch("weight vector length must be n");
    if (powers[j] < 0 || ((powers[j] % 2 == 1) != (p.sigma[j] == -1))) {
      throw ConfigError("power parity must match sigma for M-equivariance");
    }
  }
  auto phi = [weights = std::move(weights), powers = std::move(powers)](const CMat& k) {
    cd out = 1.0;
    for (std::size_t j = 0; j < powers.size(); ++j) {
      const cd c = (weights[j].cast<cd>().transpose() * k.col(j))(0, 0);
      for (int q = 0; q < powers[j]; ++q) out *= c;
    }
    return out;
  };
  return custom(p, std::move(phi));
}

const SpectralParam& BoundaryFunction::param() const { return node_->param; }
BoundaryTag BoundaryFunction::tag() const { return node_->tag; }

cd BoundaryFunction::eval(const CMat& g) const {
  if (g.rows() != n() || g.cols() != n()) throw DimensionMismatch("evaluation point has wrong dimension");
  return node_->eval(g);
}

cd BoundaryFunction::eval(const Mat& g) const { return eval(CMat(g.cast<cd>())); }

BoundaryFunction BoundaryFunction::operator+(const BoundaryFunction& other) const {
  if (!same_param(param(), other.param())) throw DimensionMismatch("sum of vectors from different representations");
  std::vector<std::pair<cd, BoundaryFunction>> t{{1.0, *this}, {1.0, other}};
  return BoundaryFunction(std::make_shared<LinCombNode>(param(), std::move(t)));
}

BoundaryFunction BoundaryFunction::operator*(cd c) const {
  std::vector<std::pair<cd, BoundaryFunction>> t{{c, *this}};
  return BoundaryFunction(std::make_shared<LinCombNode>(param(), std::move(t)));
}

cd cocycle_eval(const BoundaryFunction& f, const GroupElement& g) { return f.eval(g.matrix()); }

BoundaryFunction act(const GroupElement& g0, const BoundaryFunction& f) {
  if (g0.n() != f.n()) throw DimensionMismatch("group element and vector differ in dimension");
  return BoundaryFunction(std::make_shared<TranslateNode>(g0.inverse().matrix(), f));
}

BoundaryFunction lie_derivative(int i, const BoundaryFunction& f, double h) {
  if (i < 0 || i + 1 >= f.n()) throw DimensionMismatch("superdiagonal index out of range");
  if (!(h > 0.0 && h <= 1e-3)) throw ConfigError("finite-difference step must lie in (0, 1e-3]");
  return BoundaryFunction(std::make_shared<LieNode>(i, h, f));
}

BoundaryFunction lie_monomial(const std::vector<int>& l, const BoundaryFunction& f, double h) {
  if (static_cast<int>(l.size()) != f.n() - 1) throw DimensionMismatch("exponent vector must have n-1 entries");
  // X^l = X_1^{l_1} ... X_{n-1}^{l_{n-1}}: the rightmost factor acts first.
  BoundaryFunction out = f;
  for (int i = static_cast<int>(l.size()) - 1; i >= 0; --i) {
    if (l[i] < 0) throw ConfigError("exponents must be nonnegative");
    for (int q = 0; q < l[i]; ++q) out = lie_derivative(i, out, h);
  }
  return out;
}

std::vector<Mat> sample_K(int n, int per_angle) {
  std::vector<std::pair<int, int>> planes;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) planes.emplace_back(i, j);
  const int dims = static_cast<int>(planes.size());
  std::size_t total = 1;
  for (int d = 0; d < dims; ++d) total *= per_angle;
  std::vector<Mat> out;
  out.reserve(2 * total);
  std::vector<int> idx(dims, 0);
  Mat reflect = Mat::Identity(n, n);
  reflect(0, 0) = -1.0;
  for (std::size_t c = 0; c < total; ++c) {
    Mat k = Mat::Identity(n, n);
    for (int d = 0; d < dims; ++d) {
      const double th = 2.0 * std::numbers::pi * idx[d] / per_angle;
      Mat gv = Mat::Identity(n, n);
      const auto [i, j] = planes[d];
      gv(i, i) = std::cos(th);
      gv(j, j) = std::cos(th);
      gv(i, j) = -std::sin(th);
      gv(j, i) = std::sin(th);
      k = k * gv;
    }
    out.push_back(k);
    out.push_back(k * reflect);
    for (int d = 0; d < dims; ++d) {
      if (++idx[d] < per_angle) break;
      idx[d] = 0;
    }
  }
  return out;
}

double sup_norm_on_K(const BoundaryFunction& f, int per_angle, int max_points) {
  const int n = f.n();
  const int dims = n * (n - 1) / 2;
  int m = std::max(per_angle, 1);
  while (m > 1 && 2.0 * std::pow(static_cast<double>(m), dims) > max_points) --m;
  double sup = 0.0;
  for (const Mat& k : sample_K(n, m)) sup = std::max(sup, std::abs(f.eval_on_K(k)));
  return sup;
}

}  // namespace wh
