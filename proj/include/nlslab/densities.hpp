#pragma once

#include <string>
#include <vector>

#include "nlslab/model.hpp"

namespace nlslab {

enum class Basis { NonHermitian, Hermitian };
enum class Kind { Mixed, Reduced };

// Index sets are 1-based positions in the canonical eigenvector ordering.
// Presets: 1 = all, 2 = outside the degenerate block (1..D/2+1),
// 3 = inside it (D/2+2..D); arbitrary (a,b) ranges and explicit sets.
struct DensitySpec {
  Basis basis = Basis::NonHermitian;
  Kind kind = Kind::Mixed;
  std::vector<int> indices;

  static DensitySpec all(Basis b, int dim, Kind k = Kind::Mixed);
  static DensitySpec bulk(Basis b, int dim, Kind k = Kind::Mixed);
  static DensitySpec nls(Basis b, int dim, Kind k = Kind::Mixed);
  static DensitySpec range(Basis b, int a, int bixd, Kind k = Kind::Mixed);
  // grammar "basis:kind:indices", e.g. "nH:mixed:NLS", "H:reduced:1",
  // "nH:mixed:3-5"
  static DensitySpec parse(const std::string& text, int dim);

  void validate(int dim) const;
  std::string label() const;
};

struct DensityOperator {
  DensitySpec spec;
  CMat mat;
  double norm2 = 0.0;   // operator 2-norm, recorded as metadata
};

DensityOperator make_density(const BipartiteModel& model, const EigenSystem& eigs,
                             const DensitySpec& spec);

// C = [(1/D)Tr(rho_a) (1/D)Tr(rho_b)] / [(1/D) V_d(rho_a) . V_d(rho_b)^*]
Complex coherence_ratio(const CMat& rho_a, const CMat& rho_b);

CVec diagonal_vector(const CMat& rho);

struct OverlapRow {
  int index = 0;            // 1-based position in descending-eigenvalue order
  Complex eigenvalue;
  double score = 0.0;       // (1/D) sum_i |<rho_j|Psi_i>|^2, canonical family
  double score_unit = 0.0;  // same with unit-normalized Psi_i
  double log_score = 0.0;
  bool nonthermal = false;  // score >= 1/D (log threshold -ln D)
};

struct GroundOverlapReport {
  std::vector<OverlapRow> rows;
  double threshold_log = 0.0;     // -ln D
  int nonthermal_levels = 0;      // distinct eigenvalue levels flagged
  double sum_unit_scores = 0.0;   // sum_j of score_unit
};

GroundOverlapReport ground_overlaps(const CMat& rho, const BipartiteModel& model,
                                    const EigenSystem& eigs1);

// Coarse-grained sums sum_{i in R1, j in R2} <Psi_i | Psi_j^(*)> over the
// two index regions (outside/inside the degenerate block), for the
// conjugated and the plain partner.
struct BiorthoTable {
  Complex conj_bulk_bulk, conj_nls_nls, conj_bulk_nls, conj_nls_bulk;
  Complex plain_bulk_bulk, plain_nls_nls, plain_bulk_nls, plain_nls_bulk;
};

BiorthoTable biortho_table(const BipartiteModel& model, const EigenSystem& eigs1);

struct QOperatorChecks {
  CMat q_ij, q_ji;
  Complex trace_difference;       // Tr[Q_ij - Q_ji]
  int rank_difference = 0;        // rank of Q_ij - Q_ji
  Complex trace_difference_sq;    // Tr[(Q_ij - Q_ji)^2]
  double map_residual = 0.0;      // ||(Q_ij-Q_ji)|Psi_i> + |Psi_j>|| etc.
};

QOperatorChecks q_operators(const BipartiteModel& model, const EigenSystem& eigs1,
                            int i, int j);

}  // namespace nlslab
