#include "nlslab/ensembles.hpp"

#include <Eigen/QR>
#include <cmath>

#include "nlslab/errors.hpp"

namespace nlslab {

double EnsembleConfig::effective_sigma() const {
  return sigma > 0 ? sigma : 1.0 / std::sqrt(static_cast<double>(dim));
}

void EnsembleConfig::validate() const {
  if (dim < 4 || dim % 2 != 0)
    throw ConfigError("EnsembleConfig: D must be even and >= 4");
}

RMat goe(int dim, RngStream& stream, double sigma) {
  RMat h(dim, dim);
  for (int i = 0; i < dim; ++i) {
    h(i, i) = std::sqrt(2.0) * sigma * stream.next_gaussian();
    for (int j = i + 1; j < dim; ++j) {
      const double x = sigma * stream.next_gaussian();
      h(i, j) = x;
      h(j, i) = x;
    }
  }
  return h;
}

RMat goe(const EnsembleConfig& cfg) {
  cfg.validate();
  RngStream stream(cfg.seed);
  return goe(cfg.dim, stream, cfg.effective_sigma());
}

RMat haar_orthogonal(int dim, RngStream& stream) {
  if (dim < 1) throw ConfigError("haar_orthogonal: D must be >= 1");
  RMat a(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) a(i, j) = stream.next_gaussian();
  Eigen::HouseholderQR<RMat> qr(a);
  RMat q = qr.householderQ();
  RMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

CVec random_phases(int n, RngStream& stream) {
  if (n < 0) throw ConfigError("random_phases: n must be >= 0");
  CVec z(n);
  for (int k = 0; k < n; ++k) z[k] = stream.next_phase();
  return z;
}

}  // namespace nlslab
