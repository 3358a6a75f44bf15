#pragma once

#include <complex>

#include <Eigen/Dense>

namespace parframe {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Largest entry magnitude of A - A^dagger.
inline double hermiticity_defect(const CMatrix& A) {
  return (A - A.adjoint()).cwiseAbs().maxCoeff();
}

/// Largest entry magnitude of U^dagger U - I.
inline double unitarity_defect(const CMatrix& U) {
  const auto n = U.rows();
  return (U.adjoint() * U - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

inline CMatrix commutator(const CMatrix& A, const CMatrix& B) {
  return A * B - B * A;
}

}  // namespace parframe
