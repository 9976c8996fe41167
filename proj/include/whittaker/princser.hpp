#pragma once

// Principal series pi(v, sigma) of GL(n, R) in the noncompact picture: vectors
// are functions on G with f(g m a ubar) = sigma(m)^{-1} a^{rho - v} f(g).

#include <functional>
#include <memory>
#include <vector>

#include "whittaker/matgroup.hpp"

namespace wh {

/// Half-sum of positive roots, stored exactly as twice its components.
struct RhoVector {
  std::vector<int> twice;

  int size() const { return static_cast<int>(twice.size()); }
  double operator[](int i) const { return 0.5 * twice[i]; }
  std::vector<double> values() const;
};

/// ((n-1)/2, (n-3)/2, ..., -(n-1)/2). Requires n >= 1.
RhoVector rho(int n);
/// The GL(n-1) half-sum ((n-2)/2, ..., -(n-2)/2). Requires n >= 2.
RhoVector rho_sub(int n);

struct SpectralParam {
  int n = 0;
  std::vector<cd> v;
  std::vector<int> sigma;

  /// Checks lengths and sigma entries; throws DimensionMismatch or ConfigError.
  SpectralParam(std::vector<cd> v, std::vector<int> sigma);
  /// sigma trivial.
  explicit SpectralParam(std::vector<cd> v);

  bool trivial_sigma() const;
  std::vector<double> re_v() const;
};

/// Re v_1 < Re v_2 < ... < Re v_n.
bool in_open_negative_chamber(const SpectralParam& p);

/// Throws ChamberViolation unless the parameter is in the open negative chamber.
void require_chamber(const SpectralParam& p);

enum class BoundaryTag { spherical, translate, lie_derivative, linear_combination, custom };

/// A smooth vector of pi(v, sigma), held as an immutable evaluation tree.
///
/// eval accepts complex matrices: every node is holomorphic in the entries of
/// g on the region where holomorphic_opposite_kan succeeds, which is what lets
/// the Jacquet integral be moved onto a complex contour.
class BoundaryFunction {
 public:
  struct Node;

  /// f_0 with f_0|_K = 1. Requires trivial sigma.
  static BoundaryFunction spherical(const SpectralParam& p);

  /// f(k a ubar) = a^{rho - v} phi(k). phi must be a polynomial (or otherwise
  /// entire) function of the entries of k that satisfies
  /// phi(k m) = sigma(m) phi(k) for sign-diagonal m.
  static BoundaryFunction custom(const SpectralParam& p, std::function<cd(const CMat&)> phi);

  /// phi(k) = prod_j (w_j^T k e_j)^{p_j} with p_j odd exactly when sigma_j = -1.
  /// With each w_j a unit vector this has sup norm 1 on K.
  static BoundaryFunction k_finite(const SpectralParam& p, std::vector<Vec> weights, std::vector<int> powers);

  const SpectralParam& param() const;
  int n() const { return param().n; }
  BoundaryTag tag() const;

  cd eval(const CMat& g) const;
  cd eval(const Mat& g) const;
  cd eval_on_K(const Mat& k) const { return eval(k); }

  BoundaryFunction operator+(const BoundaryFunction& other) const;
  BoundaryFunction operator*(cd c) const;

  explicit BoundaryFunction(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  const std::shared_ptr<const Node>& node() const { return node_; }

 private:
  std::shared_ptr<const Node> node_;
};

inline BoundaryFunction operator*(cd c, const BoundaryFunction& f) { return f * c; }

/// a^{rho - v} * f|_K(k) at g = k diag(a) ubar.
cd cocycle_eval(const BoundaryFunction& f, const GroupElement& g);

/// pi(g0) f : x -> f(g0^{-1} x).
BoundaryFunction act(const GroupElement& g0, const BoundaryFunction& f);

inline constexpr double kDefaultLieStep = 1e-4;

/// d/dt at 0 of act(exp(t E_{i,i+1}), f), i 0-based, by a central difference
/// with one Richardson step. Requires 0 < h <= 1e-3.
BoundaryFunction lie_derivative(int i, const BoundaryFunction& f, double h = kDefaultLieStep);

/// X^l = X_{1,2}^{l_1} ... X_{n-1,n}^{l_{n-1}} applied to f.
BoundaryFunction lie_monomial(const std::vector<int>& l, const BoundaryFunction& f, double h = kDefaultLieStep);

/// Deterministic sample of K = O(n) by Givens angles, both components.
std::vector<Mat> sample_K(int n, int per_angle);

/// Max of |f| over sample_K(n, per_angle); a lower bound on the true sup.
/// The sample size is capped at max_points by thinning the angle grid.
double sup_norm_on_K(const BoundaryFunction& f, int per_angle = 64, int max_points = 1 << 18);

}  // namespace wh
