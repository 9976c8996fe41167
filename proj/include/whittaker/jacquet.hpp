#pragma once

// Whittaker characters, the Jacquet integral over U and the Whittaker
// function Wh_{f,m}(g) = <pi(g) f, psi_m>.

#include <span>
#include <vector>

#include "whittaker/princser.hpp"
#include "whittaker/quad.hpp"

namespace wh {

struct WhittakerCharacter {
  std::vector<double> m;
  /// Zero entries are only allowed for the degenerate (c-function) mode.
  bool degenerate = false;

  /// Throws ConfigError on a zero entry unless degenerate is set.
  explicit WhittakerCharacter(std::vector<double> m, bool degenerate = false);
  int size() const { return static_cast<int>(m.size()); }
};

/// exp(2 pi i sum m_i u_{i,i+1}). Throws NotUnipotent unless u is upper
/// unitriangular (within 1e-12).
cd psi_eval(const WhittakerCharacter& m, const GroupElement& u);

/// ((a_1/a_2) m_1, ..., (a_{n-1}/a_n) m_{n-1}).
WhittakerCharacter ad_a_m(std::span<const double> a, const WhittakerCharacter& m);

/// Deformation of the integration domain U into the complexified group:
///   u0 -> n_c t(u0) u0 t(u0)^{-1},
/// n_c = I + i sum shift_l E_{l,l+1}, t(u0) diagonal with phase differences
/// theta_l - theta_{l+1} = angle_l * x/sqrt(1+x^2) at x = u0_{l,l+1}.
/// Signs follow m so that psi decays on the contour.
struct Contour {
  std::vector<double> angle;
  std::vector<double> shift;
  bool trivial() const;
};

/// Contour used by default for the given dimension and effective character.
/// Zero entries of m_eff get no deformation in their direction.
Contour automatic_contour(int n, const std::vector<double>& m_eff);

/// Contour that leaves U real.
Contour real_contour(int n);

/// Default quadrature settings: rel_tol 1e-9 for n = 2, 1e-5 for n = 3,
/// budget 1e7 evaluations.
QuadratureSpec default_jacquet_spec(int n);

enum class ContourPolicy { automatic, real_axis };

/// Lower bound on min Re D_j / sum |terms| over a sample of the contour and
/// its homotopy to the real domain; positive means no Gram minor of a unipotent
/// point left the right half plane on the sample.
double contour_margin(int n, const Contour& c, int samples_per_axis);

/// integral over U of f(u) psi_{m_eff}(u) du, Euclidean measure on the
/// coordinates u_{ij}, i < j, bilinear pairing. spec.dim and
/// spec.frequencies are filled in from n and m_eff.
/// Throws ChamberViolation, NotConverged, ConfigError (degenerate m without flag).
QuadratureResult jacquet_integral(const BoundaryFunction& f, const WhittakerCharacter& m_eff,
                                  const QuadratureSpec& spec, ContourPolicy policy = ContourPolicy::automatic);

/// Same integral on an explicit contour; ContourError propagates.
/// The pulled-back integrand on R^{n(n-1)/2} (superdiagonal coordinates
/// first) whose integral is the Jacquet integral along the contour.
Integrand jacquet_integrand(const BoundaryFunction& f, const WhittakerCharacter& m_eff, const Contour& contour);

QuadratureResult jacquet_integral_on(const BoundaryFunction& f, const WhittakerCharacter& m_eff,
                                     const QuadratureSpec& spec, const Contour& contour);

struct WhittakerValue {
  cd value;
  /// phase * a^{rho + v}
  cd prefactor;
  QuadratureResult quad;
  double err_estimate() const { return std::abs(prefactor) * quad.err_estimate; }
};

/// Wh_{f,m}(g) through g = u0 a k:
///   psi_m(u0) a^{rho+v} integral of (pi(k) f)(u) psi_{Ad(a)m}(u) du.
WhittakerValue whittaker(const BoundaryFunction& f, const WhittakerCharacter& m, const GroupElement& g,
                         const QuadratureSpec& spec, ContourPolicy policy = ContourPolicy::automatic);

/// Wh_{f,m}(diag(a) k) without forming the product, for extreme ratios.
WhittakerValue whittaker_ak(const BoundaryFunction& f, const WhittakerCharacter& m, std::span<const double> a,
                            const Mat& k, const QuadratureSpec& spec,
                            ContourPolicy policy = ContourPolicy::automatic);

/// a^{rho + v} with principal powers of the positive a_i.
cd a_power_rho_plus_v(const SpectralParam& p, std::span<const double> a);

/// a = (r_1 ... r_{n-1}, r_2 ... r_{n-1}, ..., 1), so that a_i/a_{i+1} = r_i.
std::vector<double> a_from_ratios(std::span<const double> r);

}  // namespace wh
