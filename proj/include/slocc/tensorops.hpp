#pragma once

// Reshaping and factorization primitives on dense Eigen matrices.
//
// Conventions used throughout the library:
//   * vectorize() stacks columns (column-major), fold() is its inverse.
//   * kron(A, B) is the standard block matrix [a_ij B]; a vector indexed by
//     (i1, i2) with i2 fastest transforms by kron(A1, A2) when A1 acts on i1.
//   * realign(A, I1, I2) rearranges the I2 x I2 blocks of A so that
//     realign(kron(B, C)) == vectorize(B) * vectorize(C)^T.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace slocc {

using cplx = std::complex<double>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXc = Mat<cplx>;
using VectorXc = Vec<cplx>;
using Eigen::MatrixXd;
using Eigen::VectorXd;

inline constexpr double kDefaultRankTol = 1e-9;

/// Thrown by rank1_kron_factor when the realigned matrix is not rank one.
class NotAProductError : public std::runtime_error {
 public:
  NotAProductError(double sigma2, double sigma1)
      : std::runtime_error("matrix is not a Kronecker product: realigned sigma2/sigma1 = " +
                           std::to_string(sigma1 > 0 ? sigma2 / sigma1 : 0.0)),
        sigma2_(sigma2),
        sigma1_(sigma1) {}
  double sigma2() const { return sigma2_; }
  double sigma1() const { return sigma1_; }

 private:
  double sigma2_;
  double sigma1_;
};

template <typename Derived>
Vec<typename Derived::Scalar> vectorize(const Eigen::MatrixBase<Derived>& m) {
  const Mat<typename Derived::Scalar> dense = m;
  return Eigen::Map<const Vec<typename Derived::Scalar>>(dense.data(), dense.size());
}

template <typename Derived>
Mat<typename Derived::Scalar> fold(const Eigen::MatrixBase<Derived>& v, Eigen::Index rows,
                                   Eigen::Index cols) {
  if (v.size() != rows * cols || rows <= 0 || cols <= 0) {
    throw std::invalid_argument("fold: vector of length " + std::to_string(v.size()) +
                                " cannot be folded into " + std::to_string(rows) + "x" +
                                std::to_string(cols));
  }
  const Vec<typename Derived::Scalar> dense = v;
  return Eigen::Map<const Mat<typename Derived::Scalar>>(dense.data(), rows, cols);
}

// Row-major unflattening: entry (i, j) is v[i * cols + j]. This is the layout
// in which kron(A1, A2) acts as X -> A1 X A2^T, and equals fold(v, cols, rows)^T.
template <typename Derived>
Mat<typename Derived::Scalar> unflatten(const Eigen::MatrixBase<Derived>& v, Eigen::Index rows,
                                        Eigen::Index cols) {
  return fold(v, cols, rows).transpose();
}

template <typename Derived>
Vec<typename Derived::Scalar> flatten_rows(const Eigen::MatrixBase<Derived>& m) {
  const Mat<typename Derived::Scalar> t = m.transpose();
  return vectorize(t);
}

template <typename DA, typename DB>
Mat<typename DA::Scalar> kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  Mat<typename DA::Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

template <typename Derived>
Mat<typename Derived::Scalar> realign(const Eigen::MatrixBase<Derived>& a, Eigen::Index i1,
                                      Eigen::Index i2) {
  if (i1 <= 0 || i2 <= 0 || a.rows() != i1 * i2 || a.cols() != i1 * i2) {
    throw std::invalid_argument("realign: " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " is not (" + std::to_string(i1) +
                                "*" + std::to_string(i2) + ") square");
  }
  Mat<typename Derived::Scalar> out(i1 * i1, i2 * i2);
  // Rows ordered A11, A21, ..., A_{I1 1}, A12, ...: block (i, j) -> row i + j*I1.
  for (Eigen::Index j = 0; j < i1; ++j) {
    for (Eigen::Index i = 0; i < i1; ++i) {
      const Mat<typename Derived::Scalar> blk = a.block(i * i2, j * i2, i2, i2);
      out.row(i + j * i1) = vectorize(blk).transpose();
    }
  }
  return out;
}

template <typename Derived>
VectorXd singular_values(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return VectorXd();
  Eigen::JacobiSVD<Mat<typename Derived::Scalar>> svd(m.derived());
  return svd.singularValues();
}

template <typename Derived>
int numerical_rank(const Eigen::MatrixBase<Derived>& m, double rtol = kDefaultRankTol) {
  const VectorXd s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rtol * s(0)) ++r;
  }
  return r;
}

template <typename Scalar>
struct SvdResult {
  Mat<Scalar> u;      // full unitary, rows x rows
  VectorXd sigma;     // descending, length min(rows, cols)
  Mat<Scalar> v;      // full unitary, cols x cols
};

namespace detail {

// Index of the largest-magnitude entry; ties go to the lowest index.
template <typename Derived>
Eigen::Index argmax_abs(const Eigen::MatrixBase<Derived>& v) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > best_abs * (1.0 + 1e-12) + 1e-300) {
      best = i;
      best_abs = a;
    }
  }
  return best;
}

template <typename Scalar>
Scalar unit_phase(const Scalar& z) {
  const double a = std::abs(z);
  return a == 0.0 ? Scalar(1) : z / a;
}

}  // namespace detail

/// Full SVD m = u * diag(sigma) * v^H with a deterministic phase gauge: the
/// largest-magnitude entry of every left singular vector is real positive.
/// Columns inside a degenerate singular block are not canonicalized.
template <typename Derived>
SvdResult<typename Derived::Scalar> svd(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  Eigen::JacobiSVD<Mat<Scalar>> dec(m.derived(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  SvdResult<Scalar> out{dec.matrixU(), dec.singularValues(), dec.matrixV()};
  const Eigen::Index k = out.sigma.size();
  for (Eigen::Index i = 0; i < out.u.cols(); ++i) {
    const Scalar ph = detail::unit_phase(out.u(detail::argmax_abs(out.u.col(i)), i));
    out.u.col(i) /= ph;
    if (i < k) out.v.col(i) /= ph;
  }
  for (Eigen::Index i = k; i < out.v.cols(); ++i) {
    const Scalar ph = detail::unit_phase(out.v(detail::argmax_abs(out.v.col(i)), i));
    out.v.col(i) /= ph;
  }
  return out;
}

template <typename Scalar>
struct QrResult {
  Mat<Scalar> q;  // unitary
  Mat<Scalar> r;  // upper triangular
};

template <typename Derived>
QrResult<typename Derived::Scalar> qr(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  Eigen::HouseholderQR<Mat<Scalar>> dec(m.derived());
  QrResult<Scalar> out;
  out.q = dec.householderQ() * Mat<Scalar>::Identity(m.rows(), m.rows());
  out.r = dec.matrixQR().template triangularView<Eigen::Upper>();
  return out;
}

template <typename Scalar>
struct KronFactors {
  Mat<Scalar> b;  // I1 x I1
  Mat<Scalar> c;  // I2 x I2
};

/// Nearest Kronecker factorization A ~ B (x) C from the leading singular
/// triplet of realign(A). Gauge: ||B||_F == ||C||_F and the largest entry of
/// B is real positive. Throws NotAProductError unless realign(A) has
/// numerical rank one at rtol.
template <typename Derived>
KronFactors<typename Derived::Scalar> rank1_kron_factor(const Eigen::MatrixBase<Derived>& a,
                                                        Eigen::Index i1, Eigen::Index i2,
                                                        double rtol = kDefaultRankTol) {
  using Scalar = typename Derived::Scalar;
  const Mat<Scalar> r = realign(a, i1, i2);
  Eigen::JacobiSVD<Mat<Scalar>> dec(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorXd& s = dec.singularValues();
  const double s1 = s(0);
  const double s2 = s.size() > 1 ? s(1) : 0.0;
  if (s1 == 0.0 || s2 > rtol * s1) throw NotAProductError(s2, s1);
  const double root = std::sqrt(s1);
  Vec<Scalar> vb = root * dec.matrixU().col(0);
  Vec<Scalar> vc = root * dec.matrixV().col(0).conjugate();
  const Scalar ph = detail::unit_phase(vb(detail::argmax_abs(vb)));
  vb /= ph;
  vc *= ph;
  return {fold(vb, i1, i1), fold(vc, i2, i2)};
}

}  // namespace slocc
