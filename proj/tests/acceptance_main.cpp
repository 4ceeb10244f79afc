// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Runs the whole gate at D <= 64 in a few seconds.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "nlslab/densities.hpp"
#include "nlslab/dynamics.hpp"
#include "nlslab/model.hpp"
#include "nlslab/rng.hpp"

using namespace nlslab;

namespace {

int g_failures = 0;

struct Criterion {
  std::string name;
  bool ok = true;
  std::vector<std::string> details;

  explicit Criterion(std::string n) : name(std::move(n)) {}

  void require(bool pass, const std::string& what) {
    if (!pass) {
      ok = false;
      details.push_back(what);
    }
  }
  void require_close(double measured, double expected, double tol, const std::string& what) {
    char buf[192];
    std::snprintf(buf, sizeof(buf), "%s: measured=%.10g expected=%.10g tol=%.2g", what.c_str(),
                  measured, expected, tol);
    require(std::abs(measured - expected) <= tol, buf);
  }
  void finish() const {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name.c_str());
    for (const auto& d : details) std::printf("       %s\n", d.c_str());
    if (!ok) ++g_failures;
  }
};

struct ModelBundle {
  BipartiteModel model;
  EigenSystem e1;
  EigenSystem e2;
};

ModelBundle bundle(int dim, std::uint64_t seed) {
  ModelBundle b{build(ModelConfig{dim, 1.0, -1.0, seed}), {}, {}};
  b.e1 = subsystem_eigensystem(b.model, 1);
  b.e2 = subsystem_eigensystem(b.model, 2);
  return b;
}

void criterion_1_structure() {
  Criterion c("criterion 1: structure suite (D in {4, 8, 16, 62})");
  for (int dim : {4, 8, 16, 62}) {
    const BipartiteModel m = build(ModelConfig{dim, 1.0, -1.0, 1});
    const std::string tag = "D=" + std::to_string(dim);
    c.require(rank_tol(m.psi1) == dim / 2 + 1, tag + " rank(psi1) != D/2+1");
    c.require(rank_tol(m.psi2) == dim, tag + " rank(psi2) != D");
    c.require_close(std::abs(m.psi1.trace()), 1.0, 1e-10, tag + " trace(psi1)");
    c.require_close(std::abs(m.psi2.trace()), 1.0, 1e-10, tag + " trace(psi2)");

    const int half = dim / 2;
    double tail1 = 0.0, tail2d = 0.0, tail2o = 0.0;
    const double off = (dim - 4.0) / (static_cast<double>(dim) * dim);
    for (int i = half; i < dim; ++i)
      for (int j = half; j < dim; ++j) {
        tail1 = std::max(tail1, std::abs(m.psi1(i, j) - Complex(1.0 / dim)));
        if (i == j)
          tail2d = std::max(tail2d, std::abs(m.psi2(i, j) - Complex(1.0 / dim)));
        else
          tail2o = std::max(tail2o, std::abs(m.psi2(i, j) - Complex(off)));
      }
    c.require_close(tail1, 0.0, 1e-12, tag + " psi1 tail block deviation");
    c.require_close(tail2d, 0.0, 1e-12, tag + " psi2 tail diagonal deviation");
    c.require_close(tail2o, 0.0, 1e-12, tag + " psi2 tail off-diagonal deviation");
  }
  c.finish();
}

void criterion_2_nls_analytics() {
  Criterion c("criterion 2: closed-form analytics of the degenerate block");
  const int dim = 8, n_nls = 3;
  const NlsBasis nb = nls_eigenvectors(dim);

  double dev = 0.0;
  for (int j = 1; j <= n_nls; ++j) {
    const double norm = std::sqrt(static_cast<double>(j) * (j + 1));
    CVec want = CVec::Zero(dim);
    want[dim - j - 1] = j / norm;
    for (int k = dim - j; k < dim; ++k) want[k] = -1.0 / norm;
    dev = std::max(dev, (nb.vectors.col(j - 1) - want).norm());
  }
  c.require_close(dev, 0.0, 1e-12, "closed-form vector deviation");

  CMat block = CMat::Constant(n_nls, n_nls, Complex(1.0 / dim));
  c.require_close(eig_general(block).values[0].real(), 0.5 - 1.0 / dim, 1e-10,
                  "block nonzero eigenvalue");

  double tele = 0.0;
  for (int j = 1; j <= n_nls; ++j) tele += 1.0 / (static_cast<double>(j) * (j + 1));
  c.require_close(tele, static_cast<double>(n_nls) / (n_nls + 1), 1e-15, "telescoping sum");

  const ModelBundle b = bundle(dim, 1);
  const DensityOperator rho = make_density(b.model, b.e1, DensitySpec::nls(Basis::Hermitian, dim));
  double diag_dev = 0.0;
  for (int k = dim / 2; k < dim; ++k)
    diag_dev = std::max(diag_dev, std::abs(rho.mat(k, k) - Complex((dim - 2.0) / dim)));
  c.require_close(diag_dev, 0.0, 1e-10, "restricted density diagonal");

  Complex mean = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (i != j) mean += rho.mat(i, j);
  mean /= static_cast<double>(dim) * (dim - 1);
  c.require_close(mean.real(), -static_cast<double>(n_nls) / (dim * dim - dim), 1e-10,
                  "restricted density off-diagonal mean");
  c.require_close(mean.imag(), 0.0, 1e-10, "restricted density off-diagonal mean (imag)");
  c.finish();
}

void criterion_3_overlap_tables() {
  Criterion c("criterion 3: overlap and biorthogonality tables at D=8");
  const ModelBundle b = bundle(8, 1);

  const BiorthoTable t = biortho_table(b.model, b.e1);
  c.require_close(std::abs(t.conj_bulk_bulk), 5.0, 1e-8, "region sum bulk-bulk");
  c.require_close(std::abs(t.conj_nls_nls), 3.0, 1e-8, "region sum nls-nls");
  c.require_close(std::abs(t.conj_bulk_nls), 0.0, 1e-8, "region sum bulk-nls");
  c.require_close(std::abs(t.conj_nls_bulk), 0.0, 1e-8, "region sum nls-bulk");

  const CVec g = ground_state(b.model, b.e1);
  double dev = 0.0;
  for (int k = 5; k < 8; ++k) {
    const Complex ov = (b.e1.right.col(k).adjoint() * g)(0, 0) / 8.0;
    dev = std::max(dev, std::abs(ov - Complex(1.0 / 8.0)));
  }
  c.require_close(dev, 0.0, 1e-10, "degenerate-block ground overlaps at 1/D");

  const DensityOperator rho = make_density(b.model, b.e1, DensitySpec::nls(Basis::NonHermitian, 8));
  const GroundOverlapReport rep = ground_overlaps(rho.mat, b.model, b.e1);
  c.require_close(rep.threshold_log, -std::log(8.0), 1e-12, "nonthermal threshold");
  c.require(rep.nonthermal_levels == 2,
            "nonthermal level count: measured=" + std::to_string(rep.nonthermal_levels) +
                " expected=2");
  c.finish();
}

void criterion_4_trace_classes() {
  Criterion c("criterion 4: trace-class suite");
  const ModelBundle b = bundle(8, 1);
  const CMat h = b.model.base.cast<Complex>();

  RngStream s(404);
  double hs_dev = 0.0;
  for (int k = 0; k < 10; ++k) {
    const double t = 100.0 * s.next_double();
    for (int alpha : {1, 2}) {
      const CMat o = observable_jtj(b.model, alpha);
      const CMat t1 = evolve(h, o, t);  // similarity partner of the static copy
      const double n1 = hs_products(t1, t1).hs_norm_a;
      const double n2 = std::sqrt(std::abs(hs_products(o, o).tr_aconjb));
      const double n3 = hs_products(o, o).hs_norm_a;
      hs_dev = std::max({hs_dev, std::abs(n1 - n2), std::abs(n1 - n3)});
    }
  }
  c.require_close(hs_dev, 0.0, 1e-10, "hilbert-schmidt norm equalities over 10 random times");

  double qdev = 0.0;
  for (auto [i, j] : {std::pair{6, 7}, {6, 8}, {7, 8}}) {
    const QOperatorChecks q = q_operators(b.model, b.e1, i, j);
    qdev = std::max(qdev, std::abs(q.trace_difference_sq - Complex(-2.0)));
  }
  c.require_close(qdev, 0.0, 1e-10, "Tr[(Q_ij - Q_ji)^2] = -2");

  double chain = 0.0;
  const CMat pd = projector_PD(b.model);
  for (double t : TimeGrid{0.0, 100.0, 41, Spacing::Linear}.times())
    for (int alpha : {1, 2})
      chain = std::max(chain,
                       std::abs((evolve(h, pd, t) * observable_jtj(b.model, alpha)).trace() -
                                Complex(1.0)));
  c.require_close(chain, 0.0, 1e-10, "trace conservation over the full grid");
  c.finish();
}

void criterion_5_diagonal_ensemble() {
  Criterion c("criterion 5: diagonal-ensemble suite at D=8");
  const ModelBundle b = bundle(8, 1);
  const CMat h = b.model.base.cast<Complex>();
  const double dim = 8.0;

  const CVec j1 = j_vector(b.model, 1);
  const CVec j2 = j_vector(b.model, 2);
  const CMat rho1 = j1 * j1.adjoint();
  const CMat rho2 = j2 * j2.adjoint();
  const CMat o1 = observable_jtj(b.model, 1);
  const CMat o2 = observable_jtj(b.model, 2);

  const AverageResult same1 = long_time_average(h, rho1, o1, 1000.0, 4001);
  const AverageResult same2 = long_time_average(h, rho2, o2, 1000.0, 4001);
  const AverageResult cross1 = long_time_average(h, rho1, o2, 1000.0, 4001);
  const AverageResult cross2 = long_time_average(h, rho2, o1, 1000.0, 4001);

  // plotted convention: the trace average per Hilbert-space dimension
  c.require_close(same1.value.real() / dim, 3.0 / 64.0, 0.05 * 3.0 / 64.0,
                  "matched pair (state 1, observable 1)");
  c.require_close(same2.value.real() / dim, 3.0 / 64.0, 0.05 * 3.0 / 64.0,
                  "matched pair (state 2, observable 2)");
  c.require_close(cross1.value.real() / dim, 1.0 / 64.0, 0.05 / 64.0, "cross pair (1, 2)");
  c.require_close(cross2.value.real() / dim, 1.0 / 64.0, 0.05 / 64.0, "cross pair (2, 1)");

  RngStream s(55);
  bool consistent = true;
  for (int trial = 0; trial < 20; ++trial) {
    CMat rho(8, 8), obs(8, 8);
    for (int col = 0; col < 8; ++col)
      for (int row = 0; row < 8; ++row) {
        rho(row, col) = Complex(s.next_gaussian(), s.next_gaussian());
        obs(row, col) = Complex(s.next_gaussian(), s.next_gaussian());
      }
    rho = rho * rho.adjoint();
    rho /= rho.trace();
    const AverageResult avg = long_time_average(h, rho, obs, 10000.0, 20001);
    const Complex limit = dephased_expectation(h, rho, obs);
    if (std::abs(avg.value - limit) > 3.0 * std::max(avg.fluctuation, 1e-12)) consistent = false;
  }
  c.require(consistent, "numeric average within 3x fluctuation of the dephased value");
  c.finish();
}

void criterion_6_winding() {
  Criterion c("criterion 6: winding number");
  const ModelBundle b = bundle(8, 1);
  const CMat h = b.model.base.cast<Complex>();
  const CMat pp = projector_PDprime(b.model);

  const CMat lg = logm_principal(pp, 1e-12);
  const CMat comm = Complex(0, 1) * (h * lg - lg * h);
  const double c_norm = singular_values(comm)(0);

  // the commutator-dominated regime: phases stay adiabatic for T << 1/||C||
  c.require_close(winding_number(h, pp, 1e-3 / c_norm), 1.0, 1e-3, "adiabatic regime");
  c.require_close(winding_number(h, pp, 1.0 / c_norm), 0.841470985, 1e-6,
                  "unit phase T = 1/||C||");
  c.finish();
}

void criterion_7_dynamics() {
  Criterion c("criterion 7: dynamics properties");
  const ModelBundle b = bundle(8, 1);
  const CMat h = b.model.base.cast<Complex>();

  {
    RngStream s(700);
    double dev = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      CMat a(8, 8);
      for (int col = 0; col < 8; ++col)
        for (int row = 0; row < 8; ++row) a(row, col) = Complex(s.next_gaussian(), s.next_gaussian());
      const double t = 100.0 * s.next_double();
      const CVec la = eig_general(a).values;
      const CVec lb = eig_general(evolve(h, a, t)).values;
      dev = std::max(dev, (la - lb).norm() / std::max(1.0, la.norm()));
    }
    c.require_close(dev, 0.0, 1e-9, "unitary invariance of spectra");
  }

  const CMat full = make_density(b.model, b.e1, DensitySpec::all(Basis::NonHermitian, 8)).mat;
  const CMat bulk = make_density(b.model, b.e1, DensitySpec::bulk(Basis::NonHermitian, 8)).mat;
  const CMat nls = make_density(b.model, b.e1, DensitySpec::nls(Basis::NonHermitian, 8)).mat;
  {
    double dev = 0.0;
    for (double t : {0.9, 7.7, 31.0}) {
      const CMat u = expm(Complex(0, t) * full);
      const CMat ui = expm(Complex(0, -t) * full);
      for (const CMat* rho : {&full, &bulk, &nls})
        dev = std::max(dev, (u * (*rho) * ui - *rho).norm());
    }
    c.require_close(dev, 0.0, 1e-9, "freeze property under the flat-state flow");
  }

  const CVec g = ground_state(b.model, b.e1);
  {
    const double base = std::norm((g.adjoint() * g)(0, 0));
    double dev = 0.0;
    for (int k = 1; k <= 10; ++k) {
      TimeGrid probe{0.0, 2 * std::numbers::pi * k, 2, Spacing::Linear};
      const TimeSeries at = loschmidt_echo(nls, g, probe);
      dev = std::max(dev, std::abs(at.values[1].real() / base - 1.0));
    }
    c.require_close(dev, 0.0, 1e-6, "periodic echo revivals of the restricted density");
  }

  {
    const CMat rho_h1 = make_density(b.model, b.e1, DensitySpec::all(Basis::Hermitian, 8)).mat;
    const TimeSeries echo = loschmidt_echo(rho_h1, g, TimeGrid{0.0, 1000.0, 20001, Spacing::Linear});
    const Envelope env = echo_envelope(echo, 50);
    const double init = std::abs(echo.values[0]);
    size_t collapse = env.upper.size();
    for (size_t k = 0; k < env.upper.size(); ++k)
      if (env.upper[k] < 0.5 * init) {
        collapse = k;
        break;
      }
    bool ok = collapse < env.upper.size();
    if (ok) {
      for (size_t k = collapse; k < env.upper.size(); ++k)
        if (env.upper[k] >= 0.995 * init) ok = false;
    }
    c.require(ok, "unrestricted-density echo envelope collapses without revival");
  }

  {
    // imaginary-spectrum variance twins across 10 seeds
    TimeGrid grid{0.5, 40.0, 80, Spacing::Linear};
    bool projector_gap_persists = true;
    bool amplitude_gap_flips = true;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const ModelBundle bs = bundle(8, seed);
      const CMat hs = bs.model.base.cast<Complex>();
      const CMat pp = projector_PDprime(bs.model);
      const CMat oo1 = observable_jtj(bs.model, 1);
      const CMat oo2 = observable_jtj(bs.model, 2);
      const TimeSeries v1 = vie_series(hs, pp, oo1, grid);
      const TimeSeries v2 = vie_series(hs, pp, oo2, grid);
      bool separated = true;
      for (size_t k = 0; k < v1.values.size(); ++k)
        if (!(v2.values[k].real() > v1.values[k].real())) separated = false;
      if (!separated) projector_gap_persists = false;

      const CVec jv1 = j_vector(bs.model, 1);
      const CVec jv2 = j_vector(bs.model, 2);
      const TimeSeries u1 = vie_series(hs, jv1 * jv1.adjoint(), oo1, grid);
      const TimeSeries u2 = vie_series(hs, jv2 * jv2.adjoint(), oo2, grid);
      bool pos = false, neg = false;
      for (size_t k = 0; k < u1.values.size(); ++k) {
        const double gap = u2.values[k].real() - u1.values[k].real();
        pos = pos || gap > 0;
        neg = neg || gap < 0;
      }
      if (!(pos && neg)) amplitude_gap_flips = false;
    }
    c.require(projector_gap_persists,
              "imaginary-variance gap persists for the projector twins (10 seeds)");
    c.require(amplitude_gap_flips,
              "imaginary-variance gap changes sign for the amplitude-state twins (10 seeds)");
  }
  c.finish();
}

void criterion_8_multi_edge() {
  Criterion c("criterion 8: multi-edge ordering across 10 seeds");
  bool ordered = true;
  std::string first_violation;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const ModelBundle b = bundle(8, seed);
    const CMat h = b.model.base.cast<Complex>();
    const CMat o1 = observable_jtj(b.model, 1);
    const CMat o2 = observable_jtj(b.model, 2);

    CVec g1 = CVec::Zero(8), g2 = CVec::Zero(8);
    for (int k = 0; k < 8; ++k) {
      g1 += b.e1.right.col(k);
      g2 += b.e2.right.col(k);
    }
    const CMat q1 = g1 * g1.transpose();
    const CMat q2 = g2 * g2.transpose();

    const double a1 = long_time_average(h, q1, o1, 1000.0, 4001).value.real() / 8.0;
    const double a2 = long_time_average(h, q1, o2, 1000.0, 4001).value.real() / 8.0;
    const double a3 = long_time_average(h, q2, o2, 1000.0, 4001).value.real() / 8.0;
    const double a4 = long_time_average(h, q2, o1, 1000.0, 4001).value.real() / 8.0;
    if (!(a1 < a2 && a2 < a3 && a3 < a4)) {
      ordered = false;
      if (first_violation.empty()) {
        char buf[192];
        std::snprintf(buf, sizeof(buf),
                      "seed %llu: averages (%.6g, %.6g, %.6g, %.6g) not strictly ascending",
                      static_cast<unsigned long long>(seed), a1, a2, a3, a4);
        first_violation = buf;
      }
    }
  }
  Criterion& cr = c;
  cr.require(ordered, first_violation.empty()
                          ? "strict ascending order held for all seeds"
                          : first_violation);
  c.finish();
}

}  // namespace

int main() {
  criterion_1_structure();
  criterion_2_nls_analytics();
  criterion_3_overlap_tables();
  criterion_4_trace_classes();
  criterion_5_diagonal_ensemble();
  criterion_6_winding();
  criterion_7_dynamics();
  criterion_8_multi_edge();
  std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
