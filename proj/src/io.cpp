#include "nlslab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nlslab/errors.hpp"

namespace nlslab {

std::string format_complex(Complex z) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.17g%+.17gj", z.real(), z.imag());
  return buf;
}

Complex parse_complex(const std::string& text) {
  // split at the sign of the imaginary part (the last +/- not in an exponent)
  if (text.empty() || text.back() != 'j') throw IoError("bad complex entry '" + text + "'");
  const std::string body = text.substr(0, text.size() - 1);
  size_t split = std::string::npos;
  for (size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) throw IoError("bad complex entry '" + text + "'");
  try {
    return {std::stod(body.substr(0, split)), std::stod(body.substr(split))};
  } catch (const std::exception&) {
    throw IoError("bad complex entry '" + text + "'");
  }
}

void write_matrix_csv(const std::string& path, const CMat& a) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "dim=" << a.rows() << "\n";
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      if (j) out << ',';
      out << format_complex(a(i, j));
    }
    out << "\n";
  }
}

CMat read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("dim=", 0) != 0)
    throw IoError("matrix csv missing dim= header");
  const int dim = std::stoi(line.substr(4));
  CMat a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    if (!std::getline(in, line)) throw IoError("matrix csv truncated");
    std::stringstream ss(line);
    std::string cell;
    for (int j = 0; j < dim; ++j) {
      if (!std::getline(ss, cell, ',')) throw IoError("matrix csv row too short");
      a(i, j) = parse_complex(cell);
    }
  }
  return a;
}

void write_series_csv(const std::string& path, const TimeSeries& series) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "t,re,im\n";
  const auto ts = series.grid.times();
  char buf[128];
  for (size_t k = 0; k < ts.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", ts[k], series.values[k].real(),
                  series.values[k].imag());
    out << buf;
  }
}

void write_real_series_csv(const std::string& path, const std::vector<double>& t,
                           const std::vector<double>& v) {
  if (t.size() != v.size()) throw DimMismatch("write_real_series_csv: length mismatch");
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "t,value\n";
  char buf[96];
  for (size_t k = 0; k < t.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", t[k], v[k]);
    out << buf;
  }
}

namespace {

void write_svg(const std::string& path, const std::vector<double>& t,
               const std::vector<double>& v, const std::string& label) {
  if (t.size() != v.size() || t.size() < 2) throw IoError("svg plot needs >= 2 points");
  const double width = 720, height = 420, pad = 45;
  double tmin = t.front(), tmax = t.back();
  double vmin = v[0], vmax = v[0];
  for (double x : v) {
    vmin = std::min(vmin, x);
    vmax = std::max(vmax, x);
  }
  if (vmax == vmin) vmax = vmin + 1.0;
  if (tmax == tmin) tmax = tmin + 1.0;

  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
      << "' viewBox='0 0 " << width << ' ' << height << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<line x1='" << pad << "' y1='" << height - pad << "' x2='" << width - pad << "' y2='"
      << height - pad << "' stroke='black'/>\n";
  out << "<line x1='" << pad << "' y1='" << pad << "' x2='" << pad << "' y2='" << height - pad
      << "' stroke='black'/>\n";
  out << "<polyline fill='none' stroke='#1f77b4' stroke-width='1.2' points='";
  for (size_t k = 0; k < t.size(); ++k) {
    const double x = pad + (t[k] - tmin) / (tmax - tmin) * (width - 2 * pad);
    const double y = height - pad - (v[k] - vmin) / (vmax - vmin) * (height - 2 * pad);
    out << x << ',' << y << ' ';
  }
  out << "'/>\n";
  out << "<text x='" << pad + 4 << "' y='" << pad - 8 << "' font-size='13'>" << label
      << "</text>\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", vmax);
  out << "<text x='4' y='" << pad + 4 << "' font-size='11'>" << buf << "</text>\n";
  std::snprintf(buf, sizeof(buf), "%.4g", vmin);
  out << "<text x='4' y='" << height - pad << "' font-size='11'>" << buf << "</text>\n";
  out << "</svg>\n";
}

}  // namespace

void write_series_svg(const std::string& path, const TimeSeries& series) {
  std::vector<double> v(series.values.size());
  for (size_t k = 0; k < v.size(); ++k) v[k] = series.values[k].real();
  write_svg(path, series.grid.times(), v, series.label);
}

void write_real_series_svg(const std::string& path, const std::vector<double>& t,
                           const std::vector<double>& v, const std::string& label) {
  write_svg(path, t, v, label);
}

}  // namespace nlslab
