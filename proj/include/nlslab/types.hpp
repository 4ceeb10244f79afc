#pragma once

#include <Eigen/Dense>
#include <complex>

namespace nlslab {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline bool all_finite(const CMat& a) { return a.allFinite(); }

inline double rel_asymmetry(const CMat& a) {
  const double n = a.norm();
  if (n == 0.0) return 0.0;
  return (a - a.transpose()).norm() / n;
}

inline double rel_nonhermiticity(const CMat& a) {
  const double n = a.norm();
  if (n == 0.0) return 0.0;
  return (a - a.adjoint()).norm() / n;
}

// Tolerance-parameterized equality; matrix comparisons are never bitwise.
inline bool approx_equal(const CMat& a, const CMat& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  const double scale = std::max(1.0, std::max(a.norm(), b.norm()));
  return (a - b).norm() <= tol * scale;
}

inline bool approx_equal(Complex a, Complex b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace nlslab
