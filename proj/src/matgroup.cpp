#include "whittaker/matgroup.hpp"

#include <array>

#include <cmath>
#include <sstream>

namespace wh {

namespace {

void check_square(const Mat& m) {
  if (m.rows() != m.cols() || m.rows() < 1 || m.rows() > kMaxDim) {
    std::ostringstream os;
    os << "expected a square matrix of dimension 1.." << kMaxDim << ", got " << m.rows() << "x" << m.cols();
    throw DimensionMismatch(os.str());
  }
}

// X = Q L with Q orthogonal and L lower triangular with positive diagonal.
// Reversing the columns turns this into a Householder QR.
void ql_positive(const Mat& x, Mat& q, Mat& l) {
  const int n = static_cast<int>(x.rows());
  Mat xr = x.rowwise().reverse();
  Eigen::HouseholderQR<Mat> qr(xr);
  Mat qp = qr.householderQ();
  Mat rp = qr.matrixQR().triangularView<Eigen::Upper>();
  // Q = Q' J, L = J R' J.
  q = qp.rowwise().reverse();
  l = rp.reverse();
  for (int j = 0; j < n; ++j) {
    if (l(j, j) < 0) {
      l.row(j) *= -1.0;
      q.col(j) *= -1.0;
    }
  }
}

}  // namespace

GroupElement::GroupElement(Mat entries) : m_(std::move(entries)) {
  check_square(m_);
  const int n = static_cast<int>(m_.rows());
  const double det = m_.determinant();
  const double opnorm = m_.jacobiSvd().singularValues()(0);
  if (!std::isfinite(det) || std::abs(det) <= 1e-12 * std::pow(opnorm, n)) {
    throw SingularMatrix("matrix is singular to working precision");
  }
}

GroupElement GroupElement::identity(int n) {
  if (n < 1 || n > kMaxDim) throw DimensionMismatch("dimension out of range");
  return GroupElement(Mat::Identity(n, n));
}

GroupElement GroupElement::diagonal(std::span<const double> diag) {
  const int n = static_cast<int>(diag.size());
  if (n < 1 || n > kMaxDim) throw DimensionMismatch("dimension out of range");
  Mat m = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = diag[i];
  return GroupElement(m);
}

GroupElement GroupElement::from_rows(int n, std::span<const double> row_major) {
  if (n < 1 || n > kMaxDim || row_major.size() != static_cast<std::size_t>(n) * n) {
    throw DimensionMismatch("row-major data does not match dimension");
  }
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = row_major[i * n + j];
  return GroupElement(m);
}

GroupElement GroupElement::operator*(const GroupElement& other) const {
  if (n() != other.n()) throw DimensionMismatch("product of elements of different dimension");
  return GroupElement(Mat(m_ * other.m_));
}

GroupElement GroupElement::inverse() const { return GroupElement(Mat(m_.inverse())); }

IwasawaUAK iwasawa_uak(const GroupElement& g) {
  // g^T = k^T diag(a) u^T is a QL factorization.
  const int n = g.n();
  Mat q, l;
  ql_positive(g.matrix().transpose(), q, l);
  IwasawaUAK out;
  out.a = l.diagonal();
  out.u = Mat(l.transpose());
  for (int j = 0; j < n; ++j) out.u.col(j) /= out.a(j);
  for (int i = 0; i < n; ++i) {
    out.u(i, i) = 1.0;
    for (int j = 0; j < i; ++j) out.u(i, j) = 0.0;
  }
  out.k = q.transpose();
  return out;
}

OppositeKAN opposite_kan(const GroupElement& g) {
  const int n = g.n();
  Mat q, l;
  ql_positive(g.matrix(), q, l);
  OppositeKAN out;
  out.k = q;
  out.a = l.diagonal();
  out.ubar = l;
  for (int i = 0; i < n; ++i) {
    out.ubar.row(i) /= out.a(i);
    out.ubar(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) out.ubar(i, j) = 0.0;
  }
  return out;
}

GroupElement embed_gl(const GroupElement& g_small, int n) {
  const int m = g_small.n();
  if (m >= n || n > kMaxDim) {
    std::ostringstream os;
    os << "cannot embed GL(" << m << ") into GL(" << n << ")";
    throw DimensionMismatch(os.str());
  }
  Mat out = Mat::Identity(n, n);
  out.topLeftCorner(m, m) = g_small.matrix();
  return GroupElement(out);
}

std::vector<double> superdiagonal(const Mat& g) {
  std::vector<double> out;
  for (Eigen::Index i = 0; i + 1 < g.rows(); ++i) out.push_back(g(i, i + 1));
  return out;
}

MirabolicElement::MirabolicElement(GroupElement g) : g_(std::move(g)) {
  const int n = g_.n();
  if (n < 2) throw NotMirabolic("mirabolic elements need n >= 2");
  for (int j = 0; j < n; ++j) {
    if (g_(n - 1, j) != (j == n - 1 ? 1.0 : 0.0)) {
      throw NotMirabolic("last row must be exactly (0, ..., 0, 1)");
    }
  }
}

MirabolicElement MirabolicElement::from_parts(const GroupElement& block, std::span<const double> x) {
  const int m = block.n();
  if (x.size() != static_cast<std::size_t>(m)) throw DimensionMismatch("translation length mismatch");
  Mat g = Mat::Identity(m + 1, m + 1);
  g.topLeftCorner(m, m) = block.matrix();
  for (int i = 0; i < m; ++i) g(i, m) = x[i];
  return MirabolicElement(GroupElement(g));
}

GroupElement MirabolicElement::block() const {
  const int m = n() - 1;
  return GroupElement(Mat(g_.matrix().topLeftCorner(m, m)));
}

std::vector<double> MirabolicElement::translation() const {
  const int m = n() - 1;
  std::vector<double> x(m);
  for (int i = 0; i < m; ++i) x[i] = g_(i, m);
  return x;
}

namespace {

cd small_det(const CMat& g, const std::array<int, kMaxDim>& rows, int w, int col) {
  auto e = [&](int r, int c) { return g(rows[r], col + c); };
  switch (w) {
    case 1:
      return e(0, 0);
    case 2:
      return e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0);
    case 3:
      return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
             e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
    default: {
      CMat block(w, w);
      for (int r = 0; r < w; ++r)
        for (int c = 0; c < w; ++c) block(r, c) = e(r, c);
      return block.determinant();
    }
  }
}

}  // namespace

HolomorphicKAN holomorphic_opposite_kan(const CMat& g, bool want_k) {
  const int n = static_cast<int>(g.rows());
  // D_j = det of the bottom-right block of g^T g, expanded by Cauchy-Binet as a
  // sum of squared minors of g. For real g every term is nonnegative, so the
  // minors are free of the cancellation an elimination on g^T g would suffer.
  HolomorphicKAN out;
  out.log_a.resize(n);
  cd log_prev = 0.0;
  std::array<int, kMaxDim> rows_sel{};
  for (int j = n - 1; j >= 0; --j) {
    const int w = n - j;
    cd minor = 0.0;
    for (int i = 0; i < w; ++i) rows_sel[i] = i;
    while (true) {
      const cd det = small_det(g, rows_sel, w, j);
      minor += det * det;
      int pos = w - 1;
      while (pos >= 0 && rows_sel[pos] == n - w + pos) --pos;
      if (pos < 0) break;
      ++rows_sel[pos];
      for (int q = pos + 1; q < w; ++q) rows_sel[q] = rows_sel[q - 1] + 1;
    }
    if (!(minor.real() > 0.0)) {
      throw ContourError("bottom-right Gram minor left the right half plane");
    }
    const cd log_minor = std::log(minor);
    out.log_a(j) = 0.5 * (log_minor - log_prev);
    log_prev = log_minor;
  }
  if (want_k) {
    // g = k L with L lower triangular: orthogonalize columns from the last one
    // down, using the bilinear form and the a_j fixed above.
    out.k.resize(n, n);
    for (int j = n - 1; j >= 0; --j) {
      CVec r = g.col(j);
      for (int i = j + 1; i < n; ++i) {
        const cd proj = (out.k.col(i).transpose() * r)(0, 0);
        r -= proj * out.k.col(i);
      }
      out.k.col(j) = r * std::exp(-out.log_a(j));
    }
  }
  return out;
}

Mat elementary_unipotent(int n, int i, double t) {
  Mat e = Mat::Identity(n, n);
  e(i, i + 1) = t;
  return e;
}

double relative_frobenius(const Mat& a, const Mat& b) { return (a - b).norm() / b.norm(); }

}  // namespace wh
