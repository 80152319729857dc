#include "nvcoil/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "nvcoil/errors.hpp"

namespace nvcoil {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

SignalSeries read_signal_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");

  std::string header;
  if (!std::getline(in, header))
    throw ValidationError(path, "empty file");
  SignalSeries series;
  const auto comma = header.find(',');
  if (comma == std::string::npos)
    throw ValidationError(path, "header must have two comma-separated columns");
  series.x_label = header.substr(0, comma);
  series.y_label = header.substr(comma + 1);

  std::vector<double> xs, ys;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    double x, y;
    if (std::sscanf(line.c_str(), "%lf,%lf", &x, &y) != 2)
      throw ValidationError(path + ":" + std::to_string(line_no),
                            "expected 'number,number'");
    xs.push_back(x);
    ys.push_back(y);
  }
  if (xs.empty()) throw ValidationError(path, "no data rows");
  series.x = Eigen::Map<Eigen::ArrayXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  series.y = Eigen::Map<Eigen::ArrayXd>(ys.data(), static_cast<Eigen::Index>(ys.size()));
  return series;
}

void write_signal_csv(const SignalSeries& series, std::ostream& out) {
  out << series.x_label << ',' << series.y_label << '\n';
  for (Eigen::Index i = 0; i < series.x.size(); ++i)
    out << format_number(series.x[i]) << ',' << format_number(series.y[i]) << '\n';
}

void write_signal_csv(const SignalSeries& series, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  write_signal_csv(series, out);
}

void write_svg_lines(const std::vector<SignalSeries>& series,
                     const std::string& title, std::ostream& out) {
  constexpr int kW = 720, kH = 440, kPad = 50;
  double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  bool first = true;
  for (const auto& s : series) {
    for (Eigen::Index i = 0; i < s.x.size(); ++i) {
      if (first) {
        x_lo = x_hi = s.x[i];
        y_lo = y_hi = s.y[i];
        first = false;
      }
      x_lo = std::min(x_lo, s.x[i]); x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, s.y[i]); y_hi = std::max(y_hi, s.y[i]);
    }
  }
  if (x_hi == x_lo) x_hi = x_lo + 1;
  if (y_hi == y_lo) y_hi = y_lo + 1;

  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b"};
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\">"
      << title << "</text>\n";
  std::size_t ci = 0;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << colors[ci++ % 6]
        << "\" stroke-width=\"1.5\" points=\"";
    for (Eigen::Index i = 0; i < s.x.size(); ++i) {
      const double px = kPad + (kW - 2 * kPad) * (s.x[i] - x_lo) / (x_hi - x_lo);
      const double py = kH - kPad - (kH - 2 * kPad) * (s.y[i] - y_lo) / (y_hi - y_lo);
      char buf[48];
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px, py);
      out << buf;
    }
    out << "\"/>\n";
  }
  out << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 12
      << "\" text-anchor=\"middle\">"
      << (series.empty() ? "" : series.front().x_label) << "</text>\n";
  out << "</svg>\n";
}

Eigen::ArrayXd deterministic_gaussian(std::uint64_t seed, Eigen::Index count) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] {
    // (0, 1], avoids log(0)
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
  };
  Eigen::ArrayXd out(count);
  for (Eigen::Index i = 0; i < count; i += 2) {
    const double u1 = uniform();
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    out[i] = mag * std::cos(2.0 * std::numbers::pi * u2);
    if (i + 1 < count) out[i + 1] = mag * std::sin(2.0 * std::numbers::pi * u2);
  }
  return out;
}

}  // namespace nvcoil
