#include "nlslab/densities.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "nlslab/errors.hpp"

namespace nlslab {

namespace {

std::vector<int> range_indices(int a, int b) {
  std::vector<int> out;
  for (int k = a; k <= b; ++k) out.push_back(k);
  return out;
}

}  // namespace

DensitySpec DensitySpec::all(Basis b, int dim, Kind k) {
  return {b, k, range_indices(1, dim)};
}
DensitySpec DensitySpec::bulk(Basis b, int dim, Kind k) {
  return {b, k, range_indices(1, dim / 2 + 1)};
}
DensitySpec DensitySpec::nls(Basis b, int dim, Kind k) {
  return {b, k, range_indices(dim / 2 + 2, dim)};
}
DensitySpec DensitySpec::range(Basis b, int a, int bidx, Kind k) {
  return {b, k, range_indices(a, bidx)};
}

DensitySpec DensitySpec::parse(const std::string& text, int dim) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw BadSpecString("density spec must be basis:kind:indices, got '" + text + "'");

  DensitySpec spec;
  if (parts[0] == "nH") spec.basis = Basis::NonHermitian;
  else if (parts[0] == "H") spec.basis = Basis::Hermitian;
  else throw BadSpecString("unknown basis '" + parts[0] + "' (use nH or H)");

  if (parts[1] == "mixed") spec.kind = Kind::Mixed;
  else if (parts[1] == "reduced") spec.kind = Kind::Reduced;
  else throw BadSpecString("unknown kind '" + parts[1] + "' (use mixed or reduced)");

  const std::string& idx = parts[2];
  if (idx == "all" || idx == "1") spec.indices = range_indices(1, dim);
  else if (idx == "bulk" || idx == "2") spec.indices = range_indices(1, dim / 2 + 1);
  else if (idx == "NLS" || idx == "nls" || idx == "3") spec.indices = range_indices(dim / 2 + 2, dim);
  else if (idx.find('-') != std::string::npos) {
    const auto pos = idx.find('-');
    try {
      const int a = std::stoi(idx.substr(0, pos));
      const int b = std::stoi(idx.substr(pos + 1));
      spec.indices = range_indices(a, b);
    } catch (const std::exception&) {
      throw BadSpecString("bad index range '" + idx + "'");
    }
  } else {
    try {
      spec.indices = {std::stoi(idx)};
    } catch (const std::exception&) {
      throw BadSpecString("bad index set '" + idx + "'");
    }
  }
  spec.validate(dim);
  return spec;
}

void DensitySpec::validate(int dim) const {
  if (indices.empty()) throw BadSpecString("density spec: empty index set");
  std::set<int> seen;
  for (int i : indices) {
    if (i < 1 || i > dim) throw IndexOutOfRange("density spec: index out of 1..D");
    if (!seen.insert(i).second) throw BadSpecString("density spec: duplicate index");
  }
}

std::string DensitySpec::label() const {
  std::ostringstream os;
  os << (basis == Basis::NonHermitian ? "nH" : "H") << ':'
     << (kind == Kind::Mixed ? "mixed" : "reduced") << ':';
  if (indices.size() == 1) {
    os << indices.front();
  } else {
    os << indices.front() << '-' << indices.back();
  }
  return os.str();
}

DensityOperator make_density(const BipartiteModel& model, const EigenSystem& eigs,
                             const DensitySpec& spec) {
  const int dim = model.cfg.dim;
  spec.validate(dim);

  DensityOperator out;
  out.spec = spec;
  CMat mat = CMat::Zero(dim, dim);
  if (spec.kind == Kind::Mixed) {
    for (int i : spec.indices) {
      const CVec v = eigs.right.col(i - 1);
      if (spec.basis == Basis::NonHermitian)
        mat += v * v.transpose();   // |v><v*|
      else
        mat += v * v.adjoint();     // |v><v|
    }
  } else {
    CVec sum = CVec::Zero(dim);
    for (int i : spec.indices) sum += eigs.right.col(i - 1);
    if (spec.basis == Basis::NonHermitian)
      mat = sum * sum.transpose();
    else
      mat = sum * sum.adjoint();
  }
  out.mat = mat;
  out.norm2 = singular_values(mat)(0);

  if (spec.kind == Kind::Mixed && spec.basis == Basis::Hermitian) {
    if (rel_nonhermiticity(mat) > 1e-12)
      throw Error("make_density: Hermitian mixed density not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMat> es(mat);
    if (es.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, out.norm2))
      throw Error("make_density: Hermitian mixed density not positive semidefinite");
  }
  if (spec.kind == Kind::Reduced && rank_tol(mat) != 1)
    throw Error("make_density: reduced density is not rank one");
  return out;
}

Complex coherence_ratio(const CMat& rho_a, const CMat& rho_b) {
  if (rho_a.rows() != rho_b.rows() || rho_a.cols() != rho_b.cols())
    throw DimMismatch("coherence_ratio: dimension mismatch");
  const double dim = static_cast<double>(rho_a.rows());
  const Complex num = (rho_a.trace() / dim) * (rho_b.trace() / dim);
  const Complex den = rho_a.diagonal().transpose() * rho_b.diagonal().conjugate();
  if (std::abs(den) < 1e-30) throw ZeroDenominator("coherence_ratio: orthogonal diagonal vectors");
  return num / (den / dim);
}

CVec diagonal_vector(const CMat& rho) { return rho.diagonal(); }

GroundOverlapReport ground_overlaps(const CMat& rho, const BipartiteModel& model,
                                    const EigenSystem& eigs1) {
  const int dim = model.cfg.dim;
  if (rho.rows() != dim || rho.cols() != dim)
    throw DimMismatch("ground_overlaps: dimension mismatch");

  EigenSystem des = eig_general(rho);
  CMat family = eigs1.right;                 // canonical family, v.v = 1
  CMat family_unit = family;
  for (int k = 0; k < dim; ++k) family_unit.col(k).normalize();

  GroundOverlapReport rep;
  rep.threshold_log = -std::log(static_cast<double>(dim));

  std::vector<double> scores(dim);
  for (int j = 0; j < dim; ++j) {
    const CVec v = des.right.col(j);
    const double s = (family.adjoint() * v).squaredNorm() / dim;
    const double su = (family_unit.adjoint() * v).squaredNorm() / dim;
    scores[j] = s;
    OverlapRow row;
    row.index = j + 1;
    row.eigenvalue = des.values[j];
    row.score = s;
    row.score_unit = su;
    row.log_score = std::log(std::max(s, 1e-300));
    row.nonthermal = s >= (1.0 - 1e-9) / dim;
    rep.rows.push_back(row);
    rep.sum_unit_scores += su;
  }

  // Cluster eigenvalues into levels; a level counts as nonthermal when the
  // mean score over its eigenspace clears the 1/D threshold.
  const double scale = std::abs(des.values[0]);
  std::vector<int> level_of(dim, -1);
  int n_levels = 0;
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < j; ++k) {
      if (std::abs(des.values[j] - des.values[k]) <= 1e-8 * std::max(scale, 1e-300)) {
        level_of[j] = level_of[k];
        break;
      }
    }
    if (level_of[j] < 0) level_of[j] = n_levels++;
  }
  std::vector<double> level_sum(n_levels, 0.0);
  std::vector<int> level_count(n_levels, 0);
  for (int j = 0; j < dim; ++j) {
    level_sum[level_of[j]] += scores[j];
    level_count[level_of[j]] += 1;
  }
  for (int l = 0; l < n_levels; ++l)
    if (level_sum[l] / level_count[l] >= (1.0 - 1e-9) / dim) rep.nonthermal_levels += 1;
  return rep;
}

BiorthoTable biortho_table(const BipartiteModel& model, const EigenSystem& eigs1) {
  const int dim = model.cfg.dim;
  const int n_nls = model.cfg.nls_dim();
  const int bulk = dim - n_nls;

  CVec bulk_sum = CVec::Zero(dim), nls_sum = CVec::Zero(dim);
  for (int k = 0; k < bulk; ++k) bulk_sum += eigs1.right.col(k);
  for (int k = bulk; k < dim; ++k) nls_sum += eigs1.right.col(k);

  auto dot = [](const CVec& a, const CVec& b) { return (a.adjoint() * b)(0, 0); };
  BiorthoTable t;
  t.conj_bulk_bulk = dot(bulk_sum, bulk_sum.conjugate());
  t.conj_nls_nls = dot(nls_sum, nls_sum.conjugate());
  t.conj_bulk_nls = dot(bulk_sum, nls_sum.conjugate());
  t.conj_nls_bulk = dot(nls_sum, bulk_sum.conjugate());
  t.plain_bulk_bulk = dot(bulk_sum, bulk_sum);
  t.plain_nls_nls = dot(nls_sum, nls_sum);
  t.plain_bulk_nls = dot(bulk_sum, nls_sum);
  t.plain_nls_bulk = dot(nls_sum, bulk_sum);
  return t;
}

QOperatorChecks q_operators(const BipartiteModel& model, const EigenSystem& eigs1,
                            int i, int j) {
  const int dim = model.cfg.dim;
  const int first_nls = dim / 2 + 2;
  if (i < first_nls || i > dim || j < first_nls || j > dim)
    throw IndexNotInNls("q_operators: indices must lie in the degenerate block");
  if (i == j) throw IndexNotInNls("q_operators: indices must differ");

  const CVec vi = eigs1.right.col(i - 1);
  const CVec vj = eigs1.right.col(j - 1);

  QOperatorChecks out;
  out.q_ij = vi * vj.transpose();  // |Psi_i><Psi_j^*|
  out.q_ji = vj * vi.transpose();
  const CMat diff = out.q_ij - out.q_ji;
  out.trace_difference = diff.trace();
  out.rank_difference = rank_tol(diff);
  out.trace_difference_sq = (diff * diff).trace();
  const double r1 = (diff * vi + vj).norm();
  const double r2 = (diff * vj - vi).norm();
  const double r3 = (diff * diff * vi + vi).norm();
  out.map_residual = std::max({r1, r2, r3});
  return out;
}

}  // namespace nlslab
