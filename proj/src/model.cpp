#include "nlslab/model.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "nlslab/ensembles.hpp"
#include "nlslab/errors.hpp"

namespace nlslab {

void ModelConfig::validate() const {
  if (dim < 4 || dim % 2 != 0) throw ConfigError("ModelConfig: D must be even and >= 4");
  if (dim > 256) throw ConfigError("ModelConfig: D beyond 256 is unsupported");
  if (lambda1 == lambda2) throw ConfigError("ModelConfig: lambda1 must differ from lambda2");
  if (alpha_m != 2) throw ConfigError("ModelConfig: only the bipartite case (alpha_m = 2) is supported");
  if (seed == 0) throw ConfigError("ModelConfig: seed must be nonzero");
}

NlsBasis nls_eigenvectors(int dim) {
  if (dim < 4 || dim % 2 != 0) throw ConfigError("nls_eigenvectors: D must be even and >= 4");
  const int n = dim / 2 - 1;
  NlsBasis basis;
  basis.block_dim = dim / 2;
  basis.vectors = CMat::Zero(dim, n);
  for (int j = 1; j <= n; ++j) {
    const double norm = std::sqrt(static_cast<double>(j) * (j + 1));
    basis.vectors(dim - j - 1, j - 1) = j / norm;
    for (int k = dim - j; k < dim; ++k) basis.vectors(k, j - 1) = -1.0 / norm;
  }
  return basis;
}

namespace {

// Head rows mix two Haar frames with a random relative phase; the whole head
// block is then rescaled so the bilinear squares of the rows sum to 1/2,
// which pins Tr[S S^T] = 1 once the tail rows are appended.
CMat eigenket_matrix(int dim, RngStream stream, int alpha, double mix) {
  const int half = dim / 2;
  RngStream frame_a = stream.substream(1);
  RngStream frame_b = stream.substream(2);
  RngStream phase_stream = stream.substream(3);
  const RMat q = haar_orthogonal(dim, frame_a);
  const RMat w = haar_orthogonal(dim, frame_b);
  const CVec phases = random_phases(half, phase_stream);

  CMat s = CMat::Zero(dim, dim);
  for (int j = 0; j < half; ++j)
    s.row(j) = q.row(j).cast<Complex>() + mix * phases[j] * w.row(j).cast<Complex>();

  Complex head_sq = 0.0;
  for (int j = 0; j < half; ++j)
    head_sq += (s.row(j) * s.row(j).transpose())(0, 0);  // plain bilinear psi.psi
  s.topRows(half) *= std::sqrt(Complex(0.5) / head_sq);

  if (alpha == 1) {
    // identical tail rows: the bottom-right block of S S^T becomes the
    // rank-one all-1/D block
    for (int j = half; j < dim; ++j)
      s.row(j) = CVec::Constant(dim, Complex(1.0 / dim)).transpose();
  } else {
    // v_j = a*ones + b*e_j solves v.v = 1/D, v_j.v_k = (D-4)/D^2
    const double a = (dim - 4.0) / (static_cast<double>(dim) * dim);
    const double b = 2.0 / dim;
    for (int j = half; j < dim; ++j) {
      s.row(j) = CVec::Constant(dim, Complex(a)).transpose();
      s(j, j) += b;
    }
  }
  return s;
}

CMat symmetric_square(const CMat& s) {
  CMat psi = s * s.transpose();
  return (psi + psi.transpose()) / 2.0;
}

}  // namespace

const CMat& BipartiteModel::psi(int alpha) const {
  if (alpha == 1) return psi1;
  if (alpha == 2) return psi2;
  throw IndexOutOfRange("BipartiteModel: alpha must be 1 or 2");
}

const CMat& BipartiteModel::s(int alpha) const {
  if (alpha == 1) return s1;
  if (alpha == 2) return s2;
  throw IndexOutOfRange("BipartiteModel: alpha must be 1 or 2");
}

BipartiteModel build(const ModelConfig& cfg) {
  cfg.validate();
  const int dim = cfg.dim;
  RngStream master(cfg.seed);

  BipartiteModel m;
  m.cfg = cfg;

  RngStream goe_stream = master.substream(0);
  m.base = goe(dim, goe_stream, 1.0 / std::sqrt(static_cast<double>(dim)));
  Eigen::SelfAdjointEigenSolver<RMat> es(m.base);
  if (es.info() != Eigen::Success) throw NonConvergence("build: base eigensolve failed");
  m.base_values = es.eigenvalues();
  m.frame = es.eigenvectors();

  const int max_attempts = 16;
  bool ok = false;
  for (int attempt = 0; attempt < max_attempts && !ok; ++attempt) {
    m.s1 = eigenket_matrix(dim, master.substream(10 + 2 * attempt), 1, cfg.mix1);
    m.s2 = eigenket_matrix(dim, master.substream(11 + 2 * attempt), 2, cfg.mix2);
    m.psi1 = symmetric_square(m.s1);
    m.psi2 = symmetric_square(m.s2);
    ok = rank_tol(m.psi1) == dim / 2 + 1 && rank_tol(m.psi2) == dim;
  }
  if (!ok) throw ResampleExhausted("build: full-rank check failed after 16 reseeds");

  m.observable = cfg.lambda1 * (m.s1 * m.s1.adjoint()) + cfg.lambda2 * (m.s2 * m.s2.adjoint());

  // cheap structural sanity, independent of the test suite
  if (std::abs(m.psi1.trace() - Complex(1.0)) > 1e-10 ||
      std::abs(m.psi2.trace() - Complex(1.0)) > 1e-10)
    throw Error("build: trace normalization violated");
  return m;
}

EigenSystem subsystem_eigensystem(const BipartiteModel& model, int alpha) {
  const CMat& psi = model.psi(alpha);
  EigenSystem es = eig_general(psi);
  const int dim = model.cfg.dim;
  const int n_nls = model.cfg.nls_dim();
  const double scale = std::abs(es.values[0]);

  int bulk_end = dim;
  if (alpha == 1) {
    // the trailing cluster is the degenerate nullspace
    for (int k = dim - n_nls; k < dim; ++k)
      if (std::abs(es.values[k]) > 1e-8 * scale)
        throw NonConvergence("subsystem_eigensystem: null cluster not resolved");

    NlsBasis nb = nls_eigenvectors(dim);
    // subspace match via principal angles before swapping in the closed form
    CMat cluster = es.right.rightCols(n_nls);
    Eigen::HouseholderQR<CMat> qr(cluster);
    CMat qn = CMat(qr.householderQ()).leftCols(n_nls);
    Eigen::JacobiSVD<CMat> svd(nb.vectors.adjoint() * qn);
    const double smin = svd.singularValues()(n_nls - 1);
    if (smin < 1.0 - 1e-8)
      throw NonConvergence("subsystem_eigensystem: null cluster does not match the closed form");

    for (int j = 0; j < n_nls; ++j) {
      es.right.col(dim - n_nls + j) = nb.vectors.col(n_nls - 1 - j);
      es.values[dim - n_nls + j] = 0.0;
      es.defective[dim - n_nls + j] = false;  // geometric = algebraic multiplicity
    }
    bulk_end = dim - n_nls;
  }

  // bilinear normalization v.v = 1 with a deterministic sign gauge
  for (int k = 0; k < bulk_end; ++k) {
    CVec v = es.right.col(k);
    const Complex sq = (v.transpose() * v)(0, 0);
    if (std::abs(sq) < 1e-12)
      throw NonConvergence("subsystem_eigensystem: bilinear-isotropic eigenvector");
    v /= std::sqrt(sq);
    int imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    const Complex lead = v[imax];
    if (lead.real() < 0 || (lead.real() == 0 && lead.imag() < 0)) v = -v;
    es.right.col(k) = v;
  }
  return es;
}

CMat projector_PD(const BipartiteModel& model) {
  return CMat::Identity(model.cfg.dim, model.cfg.dim);
}

CMat projector_PDprime(const BipartiteModel& model) {
  RVec s = model.frame.rowwise().sum();  // sum_j |E_j>
  RMat p = s * s.transpose();
  return p.cast<Complex>();
}

CVec j_vector(const BipartiteModel& model, int alpha) {
  const CMat& psi = model.psi(alpha);
  const int dim = model.cfg.dim;
  CVec c(dim);
  for (int j = 0; j < dim; ++j) c[j] = std::sqrt(psi(j, j));
  c /= c.norm();
  return model.frame.cast<Complex>() * c;
}

CMat observable_jtj(const BipartiteModel& model, int alpha) {
  const CMat e = model.frame.cast<Complex>();
  return e * model.psi(alpha) * e.transpose();
}

CMat observable_jjt(const BipartiteModel& model, int alpha) {
  const CMat& s = model.s(alpha);
  return s.transpose() * s;
}

CVec ground_state(const BipartiteModel& /*model*/, const EigenSystem& eigs1) {
  return eigs1.right.rowwise().sum();
}

CVec ground_state(const BipartiteModel& model) {
  return ground_state(model, subsystem_eigensystem(model, 1));
}

}  // namespace nlslab
