#pragma once

#include <string>
#include <vector>

#include "nlslab/dynamics.hpp"
#include "nlslab/types.hpp"

namespace nlslab {

// Matrix CSV: header "dim=D", then D rows of D entries "RE+IMj" with 17
// significant digits (sign of the imaginary part always written).
std::string format_complex(Complex z);
Complex parse_complex(const std::string& text);

void write_matrix_csv(const std::string& path, const CMat& a);
CMat read_matrix_csv(const std::string& path);

// "t,re,im" per row
void write_series_csv(const std::string& path, const TimeSeries& series);
// "t,value" per row
void write_real_series_csv(const std::string& path, const std::vector<double>& t,
                           const std::vector<double>& v);

// Minimal standalone SVG line plot (real part of the series values).
void write_series_svg(const std::string& path, const TimeSeries& series);
void write_real_series_svg(const std::string& path, const std::vector<double>& t,
                           const std::vector<double>& v, const std::string& label);

}  // namespace nlslab
