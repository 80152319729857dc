#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nvcoil/geometry.hpp"

// Peak-to-peak field inhomogeneity over the inner cylindrical domain (ICD):
// sigma_pp = 2 * 100% * (B_max - B_min) / (B_max + B_min).

namespace nvcoil {

/// Sampling grid over the ICD: n_axial z-planes covering [-half_length,
/// +half_length] by n_radial radii covering [0, diameter/2], both inclusive.
struct IcdSpec {
  double diameter = 50e-6;     // m
  double half_length = 0.6e-3; // m
  int n_axial = 101;           // odd, so z = 0 is sampled
  int n_radial = 11;
};

void validate(const IcdSpec& spec);

/// sigma_pp(half_length) along one axis, plus the center field magnitude.
struct HomogeneityProfile {
  std::vector<double> half_lengths;  // m
  std::vector<double> sigma_pp;      // percent
  double b_center = 0.0;             // T, |B| at (r=0, z=0)
};

enum class ProfileAxis { Axial, Radial };

/// Peak-to-peak spread of a set of field magnitudes, in percent.
double sigma_pp(std::span<const double> magnitudes);

/// Deterministic z-major (r fastest) grid over the ICD cylinder.
std::vector<std::pair<double, double>> icd_samples(const IcdSpec& spec);

/// |B| at every grid point of `spec`, in icd_samples order.
std::vector<double> field_magnitudes(const CoilGeometry& geometry,
                                     const IcdSpec& spec);

FieldSample superpose(const CoilGeometry& geometry, double r, double z);

/// sigma_pp over the ICD truncated to each extent (ascending). Axial extents
/// are half-lengths of the full 2D grid; radial extents bound an r scan at
/// z = 0 sampled with n_axial points.
HomogeneityProfile homogeneity_profile(const CoilGeometry& geometry,
                                       const IcdSpec& base, ProfileAxis axis,
                                       std::span<const double> extents);

struct TableRow {
  std::string name;
  int n_w = 0;
  double d_mm = 0.0, h_mm = 0.0;
  double sigma_025 = 0.0;  // percent at 0.25 mm half-length
  double sigma_060 = 0.0;  // percent at 0.60 mm half-length
};

std::vector<TableRow> table_report(std::span<const CoilGeometry> geometries,
                                   const IcdSpec& base = {});

void write_table_csv(std::span<const TableRow> rows, std::ostream& out);
std::string format_table_text(std::span<const TableRow> rows);
void write_profile_csv(const HomogeneityProfile& profile, std::ostream& out);

}  // namespace nvcoil
