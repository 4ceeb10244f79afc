#pragma once

#include <cstdint>

#include "nlslab/linalg.hpp"
#include "nlslab/rng.hpp"
#include "nlslab/types.hpp"

namespace nlslab {

struct ModelConfig {
  int dim = 8;                  // D, even, >= 4
  double lambda1 = 1.0;         // two-level observable eigenvalues
  double lambda2 = -1.0;
  std::uint64_t seed = 1;
  int alpha_m = 2;              // bipartite; fixed

  // Complex admixture amplitudes of the head rows. The full-rank subsystem
  // is mixed more strongly, so the two subsystems carry distinct
  // off-diagonal fluctuation scales.
  double mix1 = 0.3;
  double mix2 = 0.5;

  int nls_dim() const { return dim / 2 - 1; }
  void validate() const;
};

// Closed-form basis of the degenerate block. Vector j (1-indexed from the
// block edge) is supported on the trailing j+1 coordinates with head
// j/sqrt(j(j+1)) and tails -1/sqrt(j(j+1)); the vectors are real and
// orthonormal.
struct NlsBasis {
  CMat vectors;    // D x D_NLS, column j-1 is vector j
  int block_dim;   // D/2
};

NlsBasis nls_eigenvectors(int dim);

struct BipartiteModel {
  ModelConfig cfg;
  RMat base;         // H_D, real symmetric
  RVec base_values;  // eigenvalues of H_D, ascending
  RMat frame;        // E, columns are the orthonormal eigenvectors |E_j>
  CMat s1, s2;       // eigenket matrices S_alpha, rows psi_j^alpha
  CMat psi1, psi2;   // subsystem matrices S_alpha S_alpha^T (symmetric)
  CMat observable;   // M = sum_alpha lambda_alpha S_alpha S_alpha^H

  const CMat& psi(int alpha) const;
  const CMat& s(int alpha) const;
};

BipartiteModel build(const ModelConfig& cfg);

// Canonical eigensystem of Psi_alpha. Ordering is the deterministic
// descending-|lambda| order of eig_general. For the rank-deficient
// subsystem the degenerate null cluster is replaced by the closed-form
// basis (largest support first) after a subspace match; all nondegenerate
// eigenvectors are rescaled so v.v = 1 (plain bilinear square) with the
// residual sign fixed by making the largest-magnitude component positive.
EigenSystem subsystem_eigensystem(const BipartiteModel& model, int alpha);

CMat projector_PD(const BipartiteModel& model);        // identity
CMat projector_PDprime(const BipartiteModel& model);   // rank 1, trace D

// Unit vector whose coefficients along |E_j> are the row amplitudes
// sqrt(psi_j . psi_j) of S_alpha; <J|J> = 1.
CVec j_vector(const BipartiteModel& model, int alpha);

// Observable J_alpha^T J_alpha = E Psi_alpha E^T.
CMat observable_jtj(const BipartiteModel& model, int alpha);
// J_alpha J_alpha^T = S_alpha^T S_alpha.
CMat observable_jjt(const BipartiteModel& model, int alpha);

// Sum of the canonically ordered right eigenvectors of Psi_alpha1
// (stored unnormalized).
CVec ground_state(const BipartiteModel& model, const EigenSystem& eigs1);
CVec ground_state(const BipartiteModel& model);

}  // namespace nlslab
