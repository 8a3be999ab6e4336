#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <complex>

namespace starhilb {

using Scalar = std::complex<double>;
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

namespace detail {

// Largest singular value. Vectors and covectors reduce to the 2-norm; for
// very wide or tall matrices the SVD runs on the (small side) Gram matrix,
// which keeps the largest singular value at full relative accuracy.
inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  const Eigen::Index small = std::min(m.rows(), m.cols());
  const Eigen::Index large = std::max(m.rows(), m.cols());
  if (large > 8 * small && small <= 1024) {
    Matrix gram = (m.rows() <= m.cols()) ? Matrix(m * m.adjoint()) : Matrix(m.adjoint() * m);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
  }
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace detail
}  // namespace starhilb
