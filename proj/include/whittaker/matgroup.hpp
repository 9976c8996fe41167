#pragma once

// Small dense matrix algebra over R and the structural decompositions of
// GL(n, R): G = U A K, G = K A Ubar, and mirabolic coordinates on P_n.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "whittaker/errors.hpp"

namespace wh {

using cd = std::complex<double>;

/// Largest supported matrix dimension. Storage is inline (no heap traffic),
/// which matters inside quadrature loops.
inline constexpr int kMaxDim = 6;

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;
using CMat = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using CVec = Eigen::Matrix<cd, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

/// An invertible real n x n matrix.
class GroupElement {
 public:
  /// Throws SingularMatrix when |det| <= 1e-12 * ||g||_2^n, DimensionMismatch
  /// for non-square or oversized input.
  explicit GroupElement(Mat entries);

  static GroupElement identity(int n);
  static GroupElement diagonal(std::span<const double> diag);
  /// Builds from row-major entries.
  static GroupElement from_rows(int n, std::span<const double> row_major);

  int n() const { return static_cast<int>(m_.rows()); }
  const Mat& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  GroupElement operator*(const GroupElement& other) const;
  GroupElement inverse() const;

 private:
  Mat m_;
};

struct IwasawaUAK {
  Mat u;  // upper unitriangular
  Vec a;  // positive diagonal of A
  Mat k;  // orthogonal
};

struct OppositeKAN {
  Mat k;     // orthogonal
  Vec a;     // positive
  Mat ubar;  // lower unitriangular
};

/// g = u * diag(a) * k.
IwasawaUAK iwasawa_uak(const GroupElement& g);

/// g = k * diag(a) * ubar. The M-ambiguity is fixed by a > 0.
OppositeKAN opposite_kan(const GroupElement& g);

/// Places g_small in the upper-left corner of an n x n identity.
GroupElement embed_gl(const GroupElement& g_small, int n);

/// (g_{1,2}, g_{2,3}, ..., g_{n-1,n}).
std::vector<double> superdiagonal(const Mat& g);
inline std::vector<double> superdiagonal(const GroupElement& g) { return superdiagonal(g.matrix()); }

/// An element of P_n: last row exactly (0, ..., 0, 1).
class MirabolicElement {
 public:
  /// Throws NotMirabolic if the last row is not (0, ..., 0, 1).
  explicit MirabolicElement(GroupElement g);
  /// [[block, x], [0, 1]].
  static MirabolicElement from_parts(const GroupElement& block, std::span<const double> x);

  int n() const { return g_.n(); }
  const GroupElement& element() const { return g_; }
  GroupElement block() const;
  std::vector<double> translation() const;

 private:
  GroupElement g_;
};

/// Holomorphic extension of the K A Ubar decomposition to complex g, using
/// the bilinear Gram matrix g^T g (no conjugation).
///
/// log_a is the continuation of log(a) that is continuous as long as every
/// bottom-right minor of g^T g stays in the open right half plane; a minor
/// with non-positive real part raises ContourError. For real input this
/// agrees with opposite_kan. k satisfies k^T k = I bilinearly.
struct HolomorphicKAN {
  CVec log_a;
  CMat k;  // filled only when requested
};
HolomorphicKAN holomorphic_opposite_kan(const CMat& g, bool want_k);

/// exp(t * E_{i,i+1}) for 0-based i.
Mat elementary_unipotent(int n, int i, double t);

/// Frobenius norm of a - b relative to the Frobenius norm of b.
double relative_frobenius(const Mat& a, const Mat& b);

}  // namespace wh
