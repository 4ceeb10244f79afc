#include "nlslab/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "nlslab/errors.hpp"

namespace nlslab {

namespace {

int worker_cap() {
  if (const char* env = std::getenv("NLSLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Deterministic: every worker owns a fixed index stripe, results land by index.
template <typename Fn>
void parallel_for(int n, Fn&& fn) {
  const int workers = std::min(worker_cap(), std::max(1, n));
  if (workers <= 1 || n < 4) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (int i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

struct DiagonalizedGenerator {
  CVec values;
  CMat vectors;
  CMat inverse;
};

// General (possibly non-normal) generator, with a reconstruction guard.
DiagonalizedGenerator diagonalize_generator(const CMat& rho) {
  EigenSystem es = eig_general(rho);
  DiagonalizedGenerator g;
  g.values = es.values;
  g.vectors = es.right;
  Eigen::PartialPivLU<CMat> lu(g.vectors);
  g.inverse = lu.solve(CMat::Identity(rho.rows(), rho.cols()));
  const CMat recon = g.vectors * g.values.asDiagonal() * g.inverse;
  if ((recon - rho).norm() > 1e-9 * std::max(1.0, rho.norm()))
    throw NonConvergence("dynamics: generator eigenbasis too ill-conditioned");
  return g;
}

}  // namespace

void TimeGrid::validate() const {
  if (!(t0 < t1)) throw ConfigError("TimeGrid: t0 < t1 required");
  if (n < 2) throw ConfigError("TimeGrid: n >= 2 required");
  if (spacing == Spacing::Log && !(t0 > 0)) throw ConfigError("TimeGrid: log spacing needs t0 > 0");
}

std::vector<double> TimeGrid::times() const {
  validate();
  std::vector<double> ts(n);
  if (spacing == Spacing::Linear) {
    const double dt = (t1 - t0) / (n - 1);
    for (int k = 0; k < n; ++k) ts[k] = t0 + dt * k;
  } else {
    const double la = std::log(t0), lb = std::log(t1);
    const double dl = (lb - la) / (n - 1);
    for (int k = 0; k < n; ++k) ts[k] = std::exp(la + dl * k);
  }
  ts.back() = t1;
  return ts;
}

Propagator::Propagator(const CMat& h, double herm_tol) {
  if (h.rows() != h.cols()) throw DimMismatch("Propagator: matrix not square");
  if (rel_nonhermiticity(h) > herm_tol)
    throw NotHermitian("Propagator: generator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> es((h + h.adjoint()) / 2.0);
  if (es.info() != Eigen::Success) throw NonConvergence("Propagator: eigensolve failed");
  energies_ = es.eigenvalues();
  frame_ = es.eigenvectors();
}

CMat Propagator::unitary(double t) const {
  const int n = static_cast<int>(energies_.size());
  CVec phases(n);
  for (int k = 0; k < n; ++k) phases[k] = std::polar(1.0, energies_[k] * t);
  return frame_ * phases.asDiagonal() * frame_.adjoint();
}

CMat Propagator::conjugate(const CMat& a, double t) const {
  const CMat u = unitary(t);
  return u * a * u.adjoint();
}

CMat EvolvedOperator::realize() const { return evolve(hamiltonian, initial, t); }

CMat evolve(const CMat& h, const CMat& a, double t) {
  if (a.rows() != h.rows() || a.cols() != h.cols())
    throw DimMismatch("evolve: dimension mismatch");
  Propagator prop(h);
  return prop.conjugate(a, t);
}

TimeSeries loschmidt_echo(const CMat& rho, const CVec& g_in, const TimeGrid& grid,
                          bool normalized) {
  if (rho.rows() != g_in.size()) throw DimMismatch("loschmidt_echo: dimension mismatch");
  CVec g = g_in;
  if (normalized) g.normalize();
  const DiagonalizedGenerator gen = diagonalize_generator(rho);
  const CVec left = (g.adjoint() * gen.vectors).transpose();  // (g^dag V)_k
  const CVec right = gen.inverse * g;

  const auto ts = grid.times();
  TimeSeries out{grid, std::vector<Complex>(ts.size()),
                 normalized ? "loschmidt_echo_normalized" : "loschmidt_echo"};
  parallel_for(static_cast<int>(ts.size()), [&](int k) {
    Complex amp = 0.0;
    for (int m = 0; m < gen.values.size(); ++m)
      amp += left[m] * right[m] * std::exp(Complex(0.0, 1.0) * gen.values[m] * ts[k]);
    out.values[k] = std::norm(amp);
  });
  return out;
}

double vie(const CMat& a) {
  EigenSystem es = eig_general(a);
  const int n = static_cast<int>(es.values.size());
  double mean = 0.0;
  for (int k = 0; k < n; ++k) mean += es.values[k].imag();
  mean /= n;
  double var = 0.0;
  for (int k = 0; k < n; ++k) {
    const double d = es.values[k].imag() - mean;
    var += d * d;
  }
  return var / n;  // population variance
}

TimeSeries vie_series(const CMat& h, const CMat& rho0, const CMat& obs,
                      const TimeGrid& grid) {
  Propagator prop(h);
  const auto ts = grid.times();
  TimeSeries out{grid, std::vector<Complex>(ts.size()), "vie"};
  parallel_for(static_cast<int>(ts.size()), [&](int k) {
    out.values[k] = vie(prop.conjugate(rho0, ts[k]) * obs);
  });
  return out;
}

TimeSeries expectation_series(const CMat& h, const CMat& rho0, const CMat& obs,
                              const TimeGrid& grid) {
  Propagator prop(h);
  const CMat rho_e = prop.frame().adjoint() * rho0 * prop.frame();
  const CMat obs_e = prop.frame().adjoint() * obs * prop.frame();
  const RVec& en = prop.energies();
  const int dim = static_cast<int>(en.size());

  const auto ts = grid.times();
  TimeSeries out{grid, std::vector<Complex>(ts.size()), "expectation"};
  parallel_for(static_cast<int>(ts.size()), [&](int k) {
    CVec ph(dim);
    for (int j = 0; j < dim; ++j) ph[j] = std::polar(1.0, en[j] * ts[k]);
    Complex tr = 0.0;
    for (int j = 0; j < dim; ++j)
      for (int l = 0; l < dim; ++l)
        tr += ph[j] * std::conj(ph[l]) * rho_e(j, l) * obs_e(l, j);
    out.values[k] = tr;
  });
  return out;
}

AverageResult long_time_average(const CMat& h, const CMat& rho0, const CMat& obs,
                                double t_final, int n_samples) {
  if (n_samples < 2) throw ConfigError("long_time_average: need at least 2 samples");
  if (t_final >= 1000.0 && n_samples < 1000)
    throw ConfigError("long_time_average: T >= 1000 needs at least 1000 samples");
  TimeGrid grid{0.0, t_final, n_samples, Spacing::Linear};
  const TimeSeries series = expectation_series(h, rho0, obs, grid);
  const auto ts = grid.times();

  // trapezoid, with the running average tracked for the fluctuation estimate
  std::vector<Complex> running(n_samples, series.values[0]);
  Complex acc = 0.0;
  for (int k = 1; k < n_samples; ++k) {
    acc += 0.5 * (series.values[k] + series.values[k - 1]) * (ts[k] - ts[k - 1]);
    running[k] = acc / ts[k];
  }

  AverageResult out;
  out.value = running.back();

  // quadrature check against the halved-step rule (every other sample)
  if (n_samples >= 5 && n_samples % 2 == 1) {
    Complex acc2 = 0.0;
    for (int k = 2; k < n_samples; k += 2)
      acc2 += 0.5 * (series.values[k] + series.values[k - 2]) * (ts[k] - ts[k - 2]);
    out.richardson_delta = std::abs(out.value - acc2 / t_final);
  } else {
    out.richardson_delta = 0.0;
  }
  const int tail = std::max(2, n_samples / 4);
  Complex mean = 0.0;
  for (int k = n_samples - tail; k < n_samples; ++k) mean += running[k];
  mean /= static_cast<double>(tail);
  double var = 0.0;
  for (int k = n_samples - tail; k < n_samples; ++k) var += std::norm(running[k] - mean);
  out.fluctuation = std::sqrt(var / tail);
  return out;
}

Complex dephased_expectation(const CMat& h, const CMat& rho0, const CMat& obs) {
  Propagator prop(h);
  const RVec& en = prop.energies();
  for (int k = 1; k < en.size(); ++k)
    if (en[k] - en[k - 1] < 1e-10)
      throw DegenerateSpectrum("dephased_expectation: spectrum has a degenerate gap");
  const CMat rho_e = prop.frame().adjoint() * rho0 * prop.frame();
  const CMat obs_e = prop.frame().adjoint() * obs * prop.frame();
  Complex out = 0.0;
  for (int j = 0; j < en.size(); ++j) out += rho_e(j, j) * obs_e(j, j);
  return out;
}

double winding_number(const CMat& h, const CMat& p_prime, double t_final, double eps) {
  if (eps <= 0) throw SingularInput("winding_number: eps must be > 0 for a rank-deficient projector");
  const CMat lg = logm_principal(p_prime, eps);
  const Complex i_unit(0.0, 1.0);
  const CMat comm = i_unit * (h * lg - lg * h);

  CVec mu;
  if (rel_nonhermiticity(comm) <= 1e-10) {
    Eigen::SelfAdjointEigenSolver<CMat> es((comm + comm.adjoint()) / 2.0);
    mu = es.eigenvalues().cast<Complex>();
  } else {
    mu = eig_general(comm).values;
  }
  const double mu_max = mu.cwiseAbs().maxCoeff();
  if (mu_max == 0.0) return 1.0;

  Complex acc = 0.0;
  int count = 0;
  for (int k = 0; k < mu.size(); ++k) {
    if (std::abs(mu[k]) <= 1e-8 * mu_max) continue;
    const Complex z = Complex(0.0, 1.0) * mu[k] * t_final;
    // series branch below |z| ~ 1e-4: the direct quotient loses ~|1/z| ulps
    if (std::abs(z) < 1e-4)
      acc += 1.0 - z / 2.0 + z * z / 6.0;
    else
      acc += (1.0 - std::exp(-z)) / z;
    ++count;
  }
  if (count == 0) return 1.0;
  return (acc / static_cast<double>(count)).real();
}

CMat first_order_evolution(const CMat& h, const CMat& p_prime, double t, double eps) {
  if (eps <= 0) throw SingularInput("first_order_evolution: eps must be > 0");
  const CMat lg = Complex(0, 1) * logm_principal(p_prime, eps);
  const CMat comm = h * lg - lg * h;
  return p_prime * expm(Complex(0, -1) * t * comm);
}

CMat rank_raise(const CMat& rho, double temperature, double eps) {
  if (temperature <= 0) throw ConfigError("rank_raise: temperature must be > 0");
  const Complex i_unit(0.0, 1.0);
  const CMat power = expm((i_unit / temperature) * logm_principal(rho, eps));
  // the principal-branch reduction inside this log is what lifts the
  // regularized null directions at small temperature
  return expm(-i_unit * temperature * logm_principal(power, 0.0));
}

double t_max_scan(const CMat& rho, const std::vector<double>& temperatures, double eps) {
  const int dim = static_cast<int>(rho.rows());
  double best = 0.0;
  for (double t : temperatures) {
    if (rank_tol(rank_raise(rho, t, eps)) == dim) best = std::max(best, t);
  }
  return best;
}

TimeSeries phase_factor_expectation(const CMat& h, const std::vector<int>& set_i,
                                    const std::vector<int>& set_j, const TimeGrid& grid) {
  Propagator prop(h);
  const int dim = static_cast<int>(prop.energies().size());
  std::vector<bool> in_i(dim + 1, false);
  for (int k : set_i) {
    if (k < 1 || k > dim) throw IndexOutOfRange("phase_factor_expectation: index out of 1..D");
    in_i[k] = true;
  }
  std::vector<double> overlap_energies;
  for (int k : set_j) {
    if (k < 1 || k > dim) throw IndexOutOfRange("phase_factor_expectation: index out of 1..D");
    if (in_i[k]) overlap_energies.push_back(prop.energies()[k - 1]);
  }
  if (overlap_energies.empty())
    throw EmptyIntersection("phase_factor_expectation: the index sets do not intersect");

  const auto ts = grid.times();
  TimeSeries out{grid, std::vector<Complex>(ts.size()), "phase_factor"};
  for (size_t k = 0; k < ts.size(); ++k) {
    Complex acc = 0.0;
    for (double e : overlap_energies) acc += std::polar(1.0, e * ts[k]);
    out.values[k] = acc / static_cast<double>(overlap_energies.size());
  }
  return out;
}

Envelope echo_envelope(const TimeSeries& series, int window) {
  if (window < 1) throw ConfigError("echo_envelope: window must be >= 1");
  const int n = static_cast<int>(series.values.size());
  if (window > n) throw ConfigError("echo_envelope: window larger than the series");
  Envelope env;
  env.upper.resize(n - window + 1);
  env.lower.resize(n - window + 1);
  for (int i = 0; i + window <= n; ++i) {
    double hi = -1e300, lo = 1e300;
    for (int k = i; k < i + window; ++k) {
      const double v = std::abs(series.values[k]);
      hi = std::max(hi, v);
      lo = std::min(lo, v);
    }
    env.upper[i] = hi;
    env.lower[i] = lo;
  }
  return env;
}

double period_estimate(const TimeSeries& series) {
  const int n = static_cast<int>(series.values.size());
  if (n < 8) return 0.0;
  std::vector<double> x(n);
  double mean = 0.0;
  for (int k = 0; k < n; ++k) {
    x[k] = std::abs(series.values[k]);
    mean += x[k];
  }
  mean /= n;
  for (auto& v : x) v -= mean;

  const int max_lag = n / 2;
  std::vector<double> ac(max_lag, 0.0);
  for (int lag = 0; lag < max_lag; ++lag) {
    double s = 0.0;
    for (int k = 0; k + lag < n; ++k) s += x[k] * x[k + lag];
    ac[lag] = s / (n - lag);
  }

  int start = 1;
  while (start < max_lag && ac[start] > 0) ++start;  // skip the zero-lag lobe
  if (start >= max_lag - 1) return 0.0;
  int best = start;
  for (int lag = start; lag < max_lag; ++lag)
    if (ac[lag] > ac[best]) best = lag;
  if (best <= 0 || best >= max_lag - 1) return 0.0;

  // parabolic refinement around the peak
  const double y0 = ac[best - 1], y1 = ac[best], y2 = ac[best + 1];
  const double denom = y0 - 2 * y1 + y2;
  double shift = 0.0;
  if (denom != 0.0) shift = 0.5 * (y0 - y2) / denom;
  const auto ts = series.grid.times();
  const double dt = ts[1] - ts[0];
  return (best + shift) * dt;
}

}  // namespace nlslab
