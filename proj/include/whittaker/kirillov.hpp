#pragma once

// Sections over U\P_n in the Kirillov picture: functions on A_{n-1} K_{n-1}
// with the psi_1 phase restored by right translation, and the weighted norms
//   ||W||_s^2 = integral |W(a'k')|^2 |det a'|^{2s} a'^{-2 rho_{n-1}} da'/a' dk'.

#include <functional>
#include <span>
#include <vector>

#include "whittaker/bounds.hpp"

namespace wh {

enum class KirillovTag { whittaker_restriction, synthetic_bump, translated };

class KirillovFunction {
 public:
  /// data(a', k') with a' the positive diagonal of A_{n-1} and k' in O(n-1).
  using Data = std::function<cd(std::span<const double>, const Mat&)>;

  KirillovFunction(int n, Data data, KirillovTag tag);

  int n() const { return n_; }
  KirillovTag tag() const { return tag_; }
  cd operator()(std::span<const double> a_sub, const Mat& k_sub) const;

 private:
  int n_;
  Data data_;
  KirillovTag tag_;
};

/// prod a'_i^{-2 rho_{n-1,i} - 1}: the density of d[g] against prod da'_i dk.
double measure_density(std::span<const double> a_sub);

/// W(a', k') = Wh_{f,1}(embed(a' k')).
KirillovFunction whittaker_restriction(const BoundaryFunction& f, const QuadratureSpec& spec);

/// amplitude * exp(-|log a' - center|^2 / (2 width^2)) * profile(k'); profile
/// defaults to 1.
KirillovFunction log_gaussian_bump(int n, std::vector<double> center, double width, cd amplitude = 1.0,
                                   std::function<cd(const Mat&)> profile = {});

/// (R(h) W)(a'k') = W(embed(a'k') h), evaluated through
///   embed(a'k') h = [[g'', x''], [0, 1]],  g'' = u'' a'' k'',
///   W(...) = exp(2 pi i x''_{n-1}) psi_1(u'') W(a'', k'').
/// The identity element returns W itself.
KirillovFunction right_translate(const KirillovFunction& W, const MirabolicElement& h);

/// The unimodular factor exp(2 pi i x''_{n-1}) psi_1(u'') and the point
/// (a'', k'') used by right_translate.
struct TranslatedPoint {
  cd phase;
  std::vector<double> a_sub;
  Mat k_sub;
};
TranslatedPoint translate_point(std::span<const double> a_sub, const Mat& k_sub, const MirabolicElement& h);

struct KirillovNormOptions {
  /// Box half-widths in log coordinates.
  std::vector<double> radii{4, 8, 12};
  /// Angles per rotation plane of O(n-1); each also taken with the reflection.
  /// The trapezoid rule on the circle converges geometrically for the smooth
  /// profiles used here.
  int angles = 32;
};

/// Squared weighted norm over expanding boxes; the K-integral is the mean
/// over the sample (dk has total mass 1). Throws ConfigError for s < 0.
WeightedL2Report weighted_norm(const KirillovFunction& W, double s, const QuadratureSpec& spec,
                               const KirillovNormOptions& opt = {});

/// | || |det h|^s R(h) W ||_s / ||W||_s - 1 |. The translated norm uses
/// opt.angles times the rounded-up condition number of the block of h.
double unitarity_check(const KirillovFunction& W, const MirabolicElement& h, double s, const QuadratureSpec& spec,
                       const KirillovNormOptions& opt = {});

}  // namespace wh
