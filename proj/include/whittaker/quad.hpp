#pragma once

// Adaptive cubature on R^d (d <= 6) for polynomially decaying, possibly
// oscillating integrands. Gauss-Kronrod 7/15 in one dimension, Genz-Malik
// 7/5 in higher dimensions, driven by a global priority queue.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "whittaker/errors.hpp"
#include "whittaker/matgroup.hpp"

namespace wh {

enum class Mapping { tangent, none };

struct QuadratureSpec {
  int dim = 1;
  double rel_tol = 1e-9;
  /// Accept once err <= max(rel_tol * |value|, abs_tol).
  double abs_tol = 0.0;
  int base_panels = 4;
  int max_depth = 30;
  /// Cycles per unit length along each axis; empty means none declared.
  std::vector<double> frequencies;
  Mapping mapping = Mapping::tangent;
  /// Box for Mapping::none.
  std::vector<double> lower, upper;
  /// Per-axis length scale s of the map x = s tan(theta); empty means 1.
  std::vector<double> scale;
  /// Endpoint order of the tangent map: 1 is x = s tan(theta); 3 and 5 first
  /// pass theta through a sin^2 or sin^4 (Sidi) substitution, so that
  /// pi/2 - theta vanishes to that order at the ends. Needed for integrands
  /// decaying like |x|^{-p} with p < 2.
  int power = 1;
  long long max_evals = 10'000'000;

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

struct QuadratureResult {
  cd value = 0.0;
  double err_estimate = 0.0;
  long long n_evals = 0;
  bool converged = false;
};

class NotConverged : public Error {
 public:
  NotConverged(const std::string& what, QuadratureResult r) : Error(what), result(r) {}
  QuadratureResult result;
};

using Integrand = std::function<cd(std::span<const double>)>;

/// Throws NotConverged when the budget or depth limit is exhausted.
QuadratureResult integrate_nd(const Integrand& f, const QuadratureSpec& spec);

/// Same algorithm; reports non-convergence through the result flag.
QuadratureResult integrate_nd_unchecked(const Integrand& f, const QuadratureSpec& spec);

struct BoxPartial {
  double radius = 0.0;
  double value = 0.0;      // integral over [-radius, radius]^d
  double err_estimate = 0.0;
  double increment = 0.0;  // value minus the previous partial
  long long n_evals = 0;
};

/// Integrals of a nonnegative integrand over nested boxes [-R_k, R_k]^d.
/// Each shell is split into 2d boxes and integrated separately, so the
/// partials are cumulative and nondecreasing up to rounding. spec.mapping and
/// spec.lower/upper are ignored.
std::vector<BoxPartial> expanding_box_integral(const Integrand& f, const std::vector<double>& radii,
                                               const QuadratureSpec& spec);

/// Integral over R^d of a function holomorphic in each variable on the region
/// swept between the real axis and the contour
///   x_j(t) = i*shift_j + t*exp(i*angle_j*t/sqrt(1+t^2)).
/// Requires the integrand to decay on the closing arcs; angles in [0, pi/4].
using HolomorphicIntegrand = std::function<cd(std::span<const cd>)>;
QuadratureResult integrate_contour(const HolomorphicIntegrand& f, const std::vector<double>& shift,
                                   const std::vector<double>& angle, const QuadratureSpec& spec);

QuadratureResult integrate_contour_1d(const std::function<cd(cd)>& f, double shift, double angle,
                                      const QuadratureSpec& spec);

struct SelfTestCase {
  std::string name;
  cd value;
  cd oracle;
  double rel_err = 0.0;
  double tolerance = 0.0;
  long long n_evals = 0;
  bool pass = false;
};

/// Closed-form oracle set: pi, pi e^{-2 pi w} for w in {1, 4, 16}, the
/// Gaussian integral, Gamma-ratio values and a separable 2-d product.
std::vector<SelfTestCase> quad_selftest();

}  // namespace wh
