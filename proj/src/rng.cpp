#include "nlslab/rng.hpp"

#include <cmath>
#include <numbers>

namespace nlslab {

double RngStream::next_gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = next_double_open();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

std::complex<double> RngStream::next_phase() {
  const double a = 2.0 * std::numbers::pi * next_double();
  return {std::cos(a), std::sin(a)};
}

}  // namespace nlslab
