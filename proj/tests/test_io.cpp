#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "nlslab/errors.hpp"
#include "nlslab/io.hpp"
#include "nlslab/rng.hpp"

using namespace nlslab;

TEST_CASE("complex formatting round trip") {
  RngStream s(12);
  for (int k = 0; k < 50; ++k) {
    const Complex z(1e6 * (s.next_double() - 0.5) * std::pow(10.0, -12.0 * s.next_double()),
                    1e6 * (s.next_double() - 0.5) * std::pow(10.0, -12.0 * s.next_double()));
    CHECK(parse_complex(format_complex(z)) == z);  // 17 significant digits are lossless
  }
  CHECK(parse_complex("1+0j") == Complex(1, 0));
  CHECK(parse_complex("-2.5e-3-1e+2j") == Complex(-2.5e-3, -100));
  CHECK_THROWS_AS(parse_complex("1.5"), nlslab::IoError);
}

TEST_CASE("matrix csv round trip") {
  RngStream s(13);
  CMat a(5, 5);
  for (int j = 0; j < 5; ++j)
    for (int i = 0; i < 5; ++i) a(i, j) = Complex(s.next_gaussian(), s.next_gaussian());
  const std::string path = (std::filesystem::temp_directory_path() / "nlslab_io_test.csv").string();
  write_matrix_csv(path, a);
  const CMat b = read_matrix_csv(path);
  CHECK(a == b);
  std::remove(path.c_str());
}

TEST_CASE("series csv layout") {
  TimeGrid grid{0.0, 1.0, 3, Spacing::Linear};
  TimeSeries series{grid, {Complex(1, 2), Complex(3, 4), Complex(5, 6)}, "x"};
  const std::string path =
      (std::filesystem::temp_directory_path() / "nlslab_series_test.csv").string();
  write_series_csv(path, series);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,re,im");
  std::getline(in, line);
  CHECK(line.rfind("0,1,2", 0) == 0);
  std::remove(path.c_str());
}
