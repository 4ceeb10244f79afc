#pragma once

#include "nlslab/rng.hpp"
#include "nlslab/types.hpp"

namespace nlslab {

struct EnsembleConfig {
  int dim = 8;                 // D, even, >= 4
  std::uint64_t seed = 1;
  double sigma = -1.0;         // off-diagonal std; < 0 selects 1/sqrt(D)

  double effective_sigma() const;
  void validate() const;
};

// Real symmetric matrix with independent Gaussian entries: off-diagonal
// variance sigma^2, diagonal variance 2 sigma^2.
RMat goe(const EnsembleConfig& cfg);
RMat goe(int dim, RngStream& stream, double sigma);

// Haar-distributed real orthogonal matrix: Gaussian matrix + QR, with the
// sign convention that the R factor has positive diagonal (fixes the gauge).
RMat haar_orthogonal(int dim, RngStream& stream);

// n unit-modulus complex numbers with uniformly distributed phases.
CVec random_phases(int n, RngStream& stream);

}  // namespace nlslab
