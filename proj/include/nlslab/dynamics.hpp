#pragma once

#include <string>
#include <vector>

#include "nlslab/linalg.hpp"
#include "nlslab/types.hpp"

namespace nlslab {

enum class Spacing { Linear, Log };

struct TimeGrid {
  double t0 = 0.0;
  double t1 = 1.0;
  int n = 2;
  Spacing spacing = Spacing::Linear;

  void validate() const;
  std::vector<double> times() const;
};

struct TimeSeries {
  TimeGrid grid;
  std::vector<Complex> values;
  std::string label;
};

struct EvolvedOperator {
  CMat initial;
  CMat hamiltonian;
  double t = 0.0;

  CMat realize() const;
};

// U A U^dag with U = exp(iHt) from the spectral decomposition of the
// Hermitian H (exactly unitary propagator).
CMat evolve(const CMat& h, const CMat& a, double t);

// Spectral propagator cache for sweeps over many times.
class Propagator {
 public:
  explicit Propagator(const CMat& h, double herm_tol = 1e-10);
  CMat unitary(double t) const;            // exp(iHt)
  CMat conjugate(const CMat& a, double t) const;
  const RVec& energies() const { return energies_; }
  const CMat& frame() const { return frame_; }

 private:
  RVec energies_;
  CMat frame_;
};

// |<g| exp(i rho t) |g>|^2 per sample (g used as stored, unnormalized;
// set normalized to rescale g to unit length first, flagged in the label).
TimeSeries loschmidt_echo(const CMat& rho, const CVec& g, const TimeGrid& grid,
                          bool normalized = false);

// Population variance of Im(lambda_k).
double vie(const CMat& a);

TimeSeries vie_series(const CMat& h, const CMat& rho0, const CMat& obs,
                      const TimeGrid& grid);

// Tr[evolve(H, rho0, t) * obs] per sample.
TimeSeries expectation_series(const CMat& h, const CMat& rho0, const CMat& obs,
                              const TimeGrid& grid);

struct AverageResult {
  Complex value;            // (1/T) integral_0^T Tr[rho(t) obs] dt, trapezoid
  double fluctuation;       // std of the running average over the tail window
  double richardson_delta;  // |value - halved-step value|, quadrature check
};

// T >= 1000 requires n_samples >= 1000.
AverageResult long_time_average(const CMat& h, const CMat& rho0, const CMat& obs,
                                double t_final, int n_samples);

// sum_j <E_j|rho0|E_j><E_j|obs|E_j>; the infinite-time limit of the
// average for a nondegenerate spectrum.
Complex dephased_expectation(const CMat& h, const CMat& rho0, const CMat& obs);

// Normalized long-time integral of the phase factor generated by
// C = [H, i log(P' + eps)]: the average of (1 - e^{-i mu T})/(i mu T) over
// the nonstationary eigenvalues mu of C (1 when none). Equals
// sin(cT)/(cT) for the rank-one projector, whose commutator spectrum is
// {+-c, 0, ...}.
double winding_number(const CMat& h, const CMat& p_prime, double t_final,
                      double eps = 1e-12);

// First-order commutator approximation of the evolved projector,
// P' e^{-it [H, i log(P' + eps)]}; a comparison op, never the engine.
CMat first_order_evolution(const CMat& h, const CMat& p_prime, double t,
                           double eps = 1e-12);

// exp(-iT log(rho^{i/T})) with eps-regularized principal logs; the branch
// reduction inside the outer log lifts near-zero eigenvalues for small T.
CMat rank_raise(const CMat& rho, double temperature, double eps = 1e-12);

// Largest T in the list whose rank-raised matrix is full rank (0 if none).
double t_max_scan(const CMat& rho, const std::vector<double>& temperatures,
                  double eps = 1e-12);

// (1/|I ^ J|) sum_{k in I ^ J} e^{i E_k t} for 1-based eigenstate index
// sets of the Hermitian h (ascending-energy indexing).
TimeSeries phase_factor_expectation(const CMat& h, const std::vector<int>& set_i,
                                    const std::vector<int>& set_j,
                                    const TimeGrid& grid);

struct Envelope {
  std::vector<double> upper;
  std::vector<double> lower;
};

Envelope echo_envelope(const TimeSeries& series, int window);

// Dominant period from the unbiased autocorrelation of |values| with
// parabolic peak refinement; 0 when no interior peak exists.
double period_estimate(const TimeSeries& series);

}  // namespace nlslab
