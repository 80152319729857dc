#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

// Small CSV / SVG helpers shared by the command-line tool and the tests.
// All numeric formatting is fixed-format so identical inputs always produce
// identical bytes.

namespace nvcoil {

struct SignalSeries {
  Eigen::ArrayXd x;
  Eigen::ArrayXd y;
  std::string x_label;
  std::string y_label;
};

/// Reads a two-column CSV with a one-line header. Throws IoError on missing
/// files and ValidationError on malformed rows.
SignalSeries read_signal_csv(const std::string& path);

void write_signal_csv(const SignalSeries& series, std::ostream& out);
void write_signal_csv(const SignalSeries& series, const std::string& path);

/// Writes one polyline per series into a minimal standalone SVG.
void write_svg_lines(const std::vector<SignalSeries>& series,
                     const std::string& title, std::ostream& out);

/// Standard normal deviates from a fixed seed (Box-Muller over a seeded
/// 64-bit Mersenne twister), identical across runs.
Eigen::ArrayXd deterministic_gaussian(std::uint64_t seed, Eigen::Index count);

/// Shortest-faithful decimal formatting used for all CSV output.
std::string format_number(double v);

}  // namespace nvcoil
