#include "nlslab/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "nlslab/errors.hpp"

namespace nlslab {

namespace {

void require_square(const CMat& a, const char* who) {
  if (a.rows() != a.cols()) throw DimMismatch(std::string(who) + ": matrix not square");
  if (!a.allFinite()) throw Error(std::string(who) + ": non-finite entries");
}

bool value_less(const Complex& x, const Complex& y) {
  const double ax = std::abs(x), ay = std::abs(y);
  if (ax != ay) return ax > ay;
  if (x.real() != y.real()) return x.real() > y.real();
  return x.imag() > y.imag();
}

// Chain-cluster eigenvalues that sit within reltol of each other.
std::vector<std::vector<int>> cluster_sorted_values(const CVec& values, double scale,
                                                    double reltol) {
  std::vector<std::vector<int>> clusters;
  const double tol = reltol * std::max(scale, 1e-300);
  for (int k = 0; k < values.size(); ++k) {
    bool placed = false;
    if (!clusters.empty()) {
      for (int idx : clusters.back()) {
        if (std::abs(values[k] - values[idx]) <= tol) {
          placed = true;
          break;
        }
      }
    }
    if (placed)
      clusters.back().push_back(k);
    else
      clusters.push_back({k});
  }
  // values are sorted by magnitude, not distance, so merge any remaining
  // cross-cluster matches
  bool merged = true;
  while (merged) {
    merged = false;
    for (size_t i = 0; i + 1 < clusters.size() && !merged; ++i) {
      for (size_t j = i + 1; j < clusters.size() && !merged; ++j) {
        for (int p : clusters[i]) {
          for (int q : clusters[j]) {
            if (std::abs(values[p] - values[q]) <= tol) {
              clusters[i].insert(clusters[i].end(), clusters[j].begin(), clusters[j].end());
              clusters.erase(clusters.begin() + j);
              merged = true;
              break;
            }
          }
          if (merged) break;
        }
      }
    }
  }
  return clusters;
}

}  // namespace

EigenSystem eig_general(const CMat& a, bool want_left) {
  require_square(a, "eig_general");
  const int n = static_cast<int>(a.rows());

  // LAPACK zgeev; Eigen's ComplexSchur fails to deflate matrices with the
  // large exactly-degenerate null blocks this project generates.
  CMat work = a;
  CVec values(n);
  CMat vectors(n, n);
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', 'V', n, work.data(), n, values.data(), nullptr, 1,
      vectors.data(), n);
  if (info != 0) throw NonConvergence("eig_general: QR iteration did not converge");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return value_less(values[i], values[j]); });

  EigenSystem out;
  out.values.resize(n);
  out.right.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = values[order[k]];
    out.right.col(k) = vectors.col(order[k]).normalized();
  }

  const double anorm = a.norm();
  out.residual = 0.0;
  for (int k = 0; k < n; ++k) {
    const double r = (a * out.right.col(k) - out.values[k] * out.right.col(k)).norm();
    out.residual = std::max(out.residual, anorm > 0 ? r / anorm : r);
  }

  // Defectiveness per eigenvalue cluster: the eigenvector block of a
  // defective cluster is rank-deficient, so its condition number blows up.
  out.defective.assign(n, false);
  const double scale = out.values.size() ? std::abs(out.values[0]) : 0.0;
  for (const auto& cluster : cluster_sorted_values(out.values, scale, 1e-8)) {
    if (cluster.size() < 2) continue;
    CMat block(n, cluster.size());
    for (size_t c = 0; c < cluster.size(); ++c) block.col(c) = out.right.col(cluster[c]);
    Eigen::JacobiSVD<CMat> svd(block);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smin <= 0 || smax / smin > 1e8)
      for (int idx : cluster) out.defective[idx] = true;
  }

  if (want_left) {
    // Rows of right^{-1} are the matched left eigenvectors (up to scale);
    // store them as columns with <l_j|r_k> diagonal-dominant.
    Eigen::PartialPivLU<CMat> lu(out.right);
    CMat inv = lu.solve(CMat::Identity(n, n));
    out.left = inv.adjoint();
  }
  return out;
}

CMat expm(const CMat& a) {
  require_square(a, "expm");
  CMat result = a.exp();
  if (!result.allFinite()) throw Overflow("expm: result overflowed");
  return result;
}

CMat logm_principal(const CMat& a, double eps) {
  require_square(a, "logm_principal");
  if (eps < 0) throw ConfigError("logm_principal: eps must be >= 0");
  const int n = static_cast<int>(a.rows());

  const bool hermitian = rel_nonhermiticity(a) <= 1e-12;

  CVec values;
  CMat vectors;
  CMat inverse;
  if (hermitian) {
    Eigen::SelfAdjointEigenSolver<CMat> es(a);
    if (es.info() != Eigen::Success) throw NonConvergence("logm_principal: eigh failed");
    values = es.eigenvalues().cast<Complex>();
    vectors = es.eigenvectors();
    inverse = vectors.adjoint();
  } else {
    EigenSystem es = eig_general(a);
    values = es.values;
    vectors = es.right;
    Eigen::PartialPivLU<CMat> lu(vectors);
    inverse = lu.solve(CMat::Identity(n, n));
  }

  const double scale = values.cwiseAbs().maxCoeff();
  CVec shifted = values;
  for (int k = 0; k < n; ++k) {
    if (std::abs(shifted[k]) < 1e-12 * std::max(scale, 1e-300)) shifted[k] = 0.0;
    shifted[k] += eps;
    if (shifted[k] == Complex(0.0, 0.0))
      throw SingularInput("logm_principal: zero eigenvalue and eps = 0");
  }

  CVec logged(n);
  for (int k = 0; k < n; ++k) logged[k] = std::log(shifted[k]);
  CMat result = vectors * logged.asDiagonal() * inverse;

  if (!hermitian) {
    // Guard the diagonalization route; fall back to the Schur-based log of
    // the shifted matrix when the eigenbasis is too ill-conditioned.
    CMat recon = vectors * shifted.asDiagonal() * inverse;
    CMat target = a + eps * CMat::Identity(n, n);
    if ((recon - target).norm() > 1e-8 * std::max(1.0, target.norm()))
      result = target.log();
  }
  if (!result.allFinite()) throw SingularInput("logm_principal: non-finite result");
  return result;
}

TakagiFactors takagi(const CMat& a, double sym_tol) {
  require_square(a, "takagi");
  if (rel_asymmetry(a) > sym_tol)
    throw NotSymmetric("takagi: input is not complex symmetric");
  const int n = static_cast<int>(a.rows());

  Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const CMat u = svd.matrixU();
  const CMat v = svd.matrixV();

  // For symmetric A = U S V^H, W = U^H conj(V) is unitary, symmetric and
  // block-diagonal over repeated singular values; U1 = U W^{1/2} then gives
  // A = U1 S U1^T.
  CMat w = u.adjoint() * v.conjugate();
  Eigen::ComplexEigenSolver<CMat> es(w);
  if (es.info() != Eigen::Success) throw NonConvergence("takagi: sqrt of phase matrix failed");
  CVec roots = es.eigenvalues();
  for (int k = 0; k < n; ++k) roots[k] = std::sqrt(roots[k]);
  Eigen::PartialPivLU<CMat> lu(es.eigenvectors());
  CMat w_half = es.eigenvectors() * roots.asDiagonal() *
                lu.solve(CMat::Identity(n, n));

  TakagiFactors out;
  out.unitary = u * w_half;
  out.sigma = svd.singularValues();

  CMat recon = out.unitary * out.sigma.cast<Complex>().asDiagonal() * out.unitary.transpose();
  if ((recon - a).norm() > 1e-9 * std::max(1.0, a.norm()))
    throw NonConvergence("takagi: reconstruction tolerance exceeded");
  return out;
}

RVec singular_values(const CMat& a) {
  Eigen::JacobiSVD<CMat> svd(a);
  return svd.singularValues();
}

int rank_tol(const CMat& a, double tol) {
  RVec sv = singular_values(a);
  if (sv.size() == 0) return 0;
  if (tol < 0) tol = 1e-10 * sv(0);
  int r = 0;
  for (int k = 0; k < sv.size(); ++k)
    if (sv(k) > tol) ++r;
  return r;
}

int nullity(const CMat& a, double tol) {
  return static_cast<int>(a.cols()) - rank_tol(a, tol);
}

HsProducts hs_products(const CMat& a, const CMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimMismatch("hs_products: dimension mismatch");
  HsProducts out;
  out.tr_ab = (a * b).trace();
  out.tr_aconjb = (a.conjugate() * b).trace();
  out.tr_adagb = (a.adjoint() * b).trace();
  out.hs_norm_a = std::sqrt(std::abs((a.adjoint() * a).trace()));
  return out;
}

}  // namespace nlslab
