#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "nlslab/ensembles.hpp"
#include "nlslab/errors.hpp"

using namespace nlslab;

TEST_CASE("goe is deterministic and symmetric") {
  EnsembleConfig cfg{4, 1, -1.0};
  RMat a = goe(cfg);
  RMat b = goe(cfg);
  CHECK(a == b);  // bit-identical
  CHECK((a - a.transpose()).norm() == 0.0);
  CHECK_THROWS_AS(goe(EnsembleConfig{3, 1, -1.0}), ConfigError);
}

TEST_CASE("goe diagonal to off-diagonal variance ratio is 2") {
  const int dim = 4, draws = 10000;
  RngStream stream(77);
  double diag_sq = 0, off_sq = 0;
  long n_diag = 0, n_off = 0;
  for (int k = 0; k < draws; ++k) {
    RMat h = goe(dim, stream, 1.0);
    for (int i = 0; i < dim; ++i) {
      diag_sq += h(i, i) * h(i, i);
      ++n_diag;
      for (int j = i + 1; j < dim; ++j) {
        off_sq += h(i, j) * h(i, j);
        ++n_off;
      }
    }
  }
  const double ratio = (diag_sq / n_diag) / (off_sq / n_off);
  CHECK(ratio == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("goe spacing-ratio statistic") {
  // brute-force sampling oracle for the Gaussian orthogonal ensemble:
  // <r> with r = min(s_k, s_{k+1})/max(s_k, s_{k+1}) over the spectrum
  const int dim = 64, draws = 200;
  RngStream stream(123);
  double acc = 0;
  long count = 0;
  for (int k = 0; k < draws; ++k) {
    RMat h = goe(dim, stream, 1.0);
    Eigen::SelfAdjointEigenSolver<RMat> es(h, Eigen::EigenvaluesOnly);
    const RVec ev = es.eigenvalues();
    for (int i = 0; i + 2 < dim; ++i) {
      const double s1 = ev[i + 1] - ev[i], s2 = ev[i + 2] - ev[i + 1];
      acc += std::min(s1, s2) / std::max(s1, s2);
      ++count;
    }
  }
  CHECK(std::abs(acc / count - 0.5307) <= 0.01);
}

TEST_CASE("haar orthogonal matrices") {
  RngStream s(5);
  RMat q1 = haar_orthogonal(1, s);
  CHECK(q1(0, 0) == doctest::Approx(1.0));  // positive-diagonal convention

  RngStream s64(6);
  RMat q = haar_orthogonal(64, s64);
  CHECK((q.transpose() * q - RMat::Identity(64, 64)).norm() < 1e-12);
}

TEST_CASE("haar column statistics") {
  const int dim = 8, draws = 10000;
  RngStream stream(99);
  double sum = 0, sq = 0;
  long n = 0;
  for (int k = 0; k < draws; ++k) {
    RMat q = haar_orthogonal(dim, stream);
    for (int i = 0; i < dim; ++i) {
      sum += q(i, 0);
      sq += q(i, 0) * q(i, 0);
      ++n;
    }
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(sq / n == doctest::Approx(1.0 / dim).epsilon(0.03));
}

TEST_CASE("random phases") {
  RngStream s(1);
  CHECK(random_phases(0, s).size() == 0);
  RngStream s2(2);
  CVec z = random_phases(1000, s2);
  for (int k = 0; k < z.size(); ++k) CHECK(std::abs(std::abs(z[k]) - 1.0) < 1e-15);

  RngStream s3(3);
  Complex mean = 0.0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) mean += s3.next_phase();
  CHECK(std::abs(mean) / n < 0.02);  // law of large numbers
}
