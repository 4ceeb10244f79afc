#pragma once

#include <optional>
#include <vector>

#include "nlslab/types.hpp"

namespace nlslab {

// Eigendecomposition of a general complex matrix.
// values are sorted by descending |lambda|, ties broken by descending real
// part, then descending imaginary part, so runs are comparable across
// invocations. Right eigenvectors are unit 2-norm columns.
struct EigenSystem {
  CVec values;
  CMat right;                     // columns
  std::optional<CMat> left;      // columns; <l_j|r_k> ~ delta_jk when present
  std::vector<bool> defective;   // per eigenvalue, shared across its cluster
  double residual = 0.0;         // max_k ||A r_k - lambda_k r_k||_2 / ||A||_F

  bool any_defective() const {
    for (bool d : defective)
      if (d) return true;
    return false;
  }
};

struct TakagiFactors {
  CMat unitary;   // U
  RVec sigma;     // non-negative, descending; A = U diag(sigma) U^T
};

struct HsProducts {
  Complex tr_ab;       // Tr[A B]
  Complex tr_aconjb;   // Tr[A* B]
  Complex tr_adagb;    // Tr[A^dag B]
  double hs_norm_a;    // sqrt(Tr[A^dag A])
};

EigenSystem eig_general(const CMat& a, bool want_left = false);

// exp(A) by scaling-and-squaring with Pade approximants; valid for
// non-normal and defective inputs.
CMat expm(const CMat& a);

// Principal matrix logarithm. For singular input with eps > 0 the
// regularization eps is added to the eigenvalues (equivalent to log(A+eps*I)
// for diagonalizable A, but immune to the O(noise/eps) blowup of
// diagonalizing the shifted matrix directly). Eigenvalues below
// 1e-12*max|lambda| are snapped to zero first so a degenerate nullspace maps
// to exactly log(eps).
CMat logm_principal(const CMat& a, double eps = 0.0);

TakagiFactors takagi(const CMat& a, double sym_tol = 1e-8);

// Number of singular values above tol; tol < 0 selects 1e-10 * sigma_max.
int rank_tol(const CMat& a, double tol = -1.0);
int nullity(const CMat& a, double tol = -1.0);

HsProducts hs_products(const CMat& a, const CMat& b);

RVec singular_values(const CMat& a);

}  // namespace nlslab
