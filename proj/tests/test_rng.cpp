#include <doctest.h>

#include <cmath>

#include "nlslab/rng.hpp"

using nlslab::RngStream;

TEST_CASE("splitmix64 reference vectors") {
  // canonical outputs of the published algorithm for seed 0
  RngStream s0(0);
  CHECK(s0.next_u64() == 0xE220A8397B1DCDAFULL);
  CHECK(s0.next_u64() == 0x6E789E6AA1B965F4ULL);
  CHECK(s0.next_u64() == 0x06C45D188009454FULL);

  RngStream s42(42);
  CHECK(s42.next_u64() == 0xBDD732262FEB6E95ULL);
  CHECK(s42.next_u64() == 0x28EFE333B266F103ULL);
  CHECK(s42.next_u64() == 0x47526757130F9F52ULL);
}

TEST_CASE("same seed reproduces the whole stream") {
  RngStream a(123456789), b(123456789);
  for (int k = 0; k < 1000; ++k) CHECK(a.next_u64() == b.next_u64());
  RngStream c(99), d(99);
  for (int k = 0; k < 100; ++k) CHECK(c.next_gaussian() == d.next_gaussian());
}

TEST_CASE("uniform doubles live in [0,1)") {
  RngStream s(5);
  for (int k = 0; k < 10000; ++k) {
    const double u = s.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("gaussian moments") {
  RngStream s(2024);
  const int n = 200000;
  double sum = 0, sq = 0;
  for (int k = 0; k < n; ++k) {
    const double g = s.next_gaussian();
    sum += g;
    sq += g * g;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sq / n - 1.0) < 0.02);
}

TEST_CASE("phases are unit modulus") {
  RngStream s(17);
  for (int k = 0; k < 1000; ++k) CHECK(std::abs(std::abs(s.next_phase()) - 1.0) < 1e-15);
}

TEST_CASE("substreams are statistically independent") {
  // correlation between sibling streams over 10^3 (parent, child) pairs
  RngStream master(31415);
  double sum_xy = 0, sum_x = 0, sum_y = 0, sum_x2 = 0, sum_y2 = 0;
  const int n = 1000;
  for (int k = 0; k < n; ++k) {
    RngStream a = master.substream(2 * k);
    RngStream b = master.substream(2 * k + 1);
    const double x = a.next_double(), y = b.next_double();
    sum_x += x;
    sum_y += y;
    sum_xy += x * y;
    sum_x2 += x * x;
    sum_y2 += y * y;
  }
  const double cx = sum_x / n, cy = sum_y / n;
  const double cov = sum_xy / n - cx * cy;
  const double vx = sum_x2 / n - cx * cx, vy = sum_y2 / n - cy * cy;
  CHECK(std::abs(cov / std::sqrt(vx * vy)) < 0.1);

  // no state-trajectory overlap between adjacent substreams
  RngStream a = master.substream(0);
  RngStream b = master.substream(1);
  for (int k = 0; k < 100; ++k) CHECK(a.next_u64() != b.next_u64());
}
