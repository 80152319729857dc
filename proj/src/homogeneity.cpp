#include "nvcoil/homogeneity.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace nvcoil {

void validate(const IcdSpec& spec) {
  if (!(spec.diameter > 0.0)) throw ValidationError("diameter", "must be > 0");
  if (!(spec.half_length > 0.0))
    throw ValidationError("half_length", "must be > 0");
  if (spec.n_axial < 3 || spec.n_axial % 2 == 0)
    throw ValidationError("n_axial", "must be odd and >= 3");
  if (spec.n_radial < 2) throw ValidationError("n_radial", "must be >= 2");
}

double sigma_pp(std::span<const double> magnitudes) {
  if (magnitudes.empty())
    throw std::invalid_argument("sigma_pp: empty input");
  double lo = magnitudes[0], hi = magnitudes[0];
  for (double b : magnitudes) {
    if (!(b > 0.0))
      throw std::domain_error("sigma_pp: magnitudes must be > 0");
    lo = std::min(lo, b);
    hi = std::max(hi, b);
  }
  return 2.0 * 100.0 * (hi - lo) / (hi + lo);
}

std::vector<std::pair<double, double>> icd_samples(const IcdSpec& spec) {
  validate(spec);
  std::vector<std::pair<double, double>> points;
  points.reserve(static_cast<std::size_t>(spec.n_axial) * spec.n_radial);
  for (int iz = 0; iz < spec.n_axial; ++iz) {
    const double z = -spec.half_length +
                     2.0 * spec.half_length * iz / (spec.n_axial - 1);
    for (int ir = 0; ir < spec.n_radial; ++ir) {
      const double r = 0.5 * spec.diameter * ir / (spec.n_radial - 1);
      points.emplace_back(r, z);
    }
  }
  return points;
}

FieldSample superpose(const CoilGeometry& geometry, double r, double z) {
  return superpose(std::span<const LoopTurn>(geometry.turns), r, z);
}

std::vector<double> field_magnitudes(const CoilGeometry& geometry,
                                     const IcdSpec& spec) {
  const auto points = icd_samples(spec);
  std::vector<double> mags;
  mags.reserve(points.size());
  for (const auto& [r, z] : points)
    mags.push_back(superpose(geometry, r, z).magnitude);
  return mags;
}

HomogeneityProfile homogeneity_profile(const CoilGeometry& geometry,
                                       const IcdSpec& base, ProfileAxis axis,
                                       std::span<const double> extents) {
  if (extents.empty())
    throw std::invalid_argument("homogeneity_profile: no extents given");
  for (std::size_t i = 0; i < extents.size(); ++i) {
    if (!(extents[i] > 0.0))
      throw std::invalid_argument("homogeneity_profile: extents must be > 0");
    if (i > 0 && !(extents[i] > extents[i - 1]))
      throw std::invalid_argument("homogeneity_profile: extents must ascend");
  }

  HomogeneityProfile profile;
  profile.b_center = superpose(geometry, 0.0, 0.0).magnitude;
  profile.half_lengths.assign(extents.begin(), extents.end());
  profile.sigma_pp.reserve(extents.size());
  for (double extent : extents) {
    std::vector<double> mags;
    if (axis == ProfileAxis::Axial) {
      IcdSpec spec = base;
      spec.half_length = extent;
      mags = field_magnitudes(geometry, spec);
    } else {
      validate(base);
      mags.reserve(base.n_axial);
      for (int i = 0; i < base.n_axial; ++i) {
        const double r = extent * i / (base.n_axial - 1);
        mags.push_back(superpose(geometry, r, 0.0).magnitude);
      }
    }
    profile.sigma_pp.push_back(sigma_pp(mags));
  }
  return profile;
}

std::vector<TableRow> table_report(std::span<const CoilGeometry> geometries,
                                   const IcdSpec& base) {
  if (geometries.empty())
    throw std::invalid_argument("table_report: no geometries given");
  std::vector<TableRow> rows;
  rows.reserve(geometries.size());
  for (const CoilGeometry& g : geometries) {
    const double extents[] = {0.25e-3, 0.60e-3};
    const auto profile = homogeneity_profile(g, base, ProfileAxis::Axial, extents);
    rows.push_back({g.name, g.physical_turns, g.envelope_d * 1e3,
                    g.envelope_h * 1e3, profile.sigma_pp[0],
                    profile.sigma_pp[1]});
  }
  return rows;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

void write_table_csv(std::span<const TableRow> rows, std::ostream& out) {
  out << "name,n_w,d_mm,h_mm,sigma_025,sigma_060\n";
  for (const TableRow& r : rows) {
    out << r.name << ',' << r.n_w << ',' << num(r.d_mm) << ',' << num(r.h_mm)
        << ',' << num(r.sigma_025) << ',' << num(r.sigma_060) << '\n';
  }
}

std::string format_table_text(std::span<const TableRow> rows) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-8s %4s %12s %18s %18s\n", "name", "n_w",
                "D x H, mm", "sigma_pp(0.25mm) %", "sigma_pp(0.60mm) %");
  out << line;
  for (const TableRow& r : rows) {
    char dims[40];
    std::snprintf(dims, sizeof(dims), "%g x %g", r.d_mm, r.h_mm);
    std::snprintf(line, sizeof(line), "%-8s %4d %12s %18.4g %18.4g\n",
                  r.name.c_str(), r.n_w, dims, r.sigma_025, r.sigma_060);
    out << line;
  }
  return out.str();
}

void write_profile_csv(const HomogeneityProfile& profile, std::ostream& out) {
  out << "half_length_mm,sigma_pp_percent\n";
  char line[80];
  for (std::size_t i = 0; i < profile.half_lengths.size(); ++i) {
    std::snprintf(line, sizeof(line), "%.9g,%.9g\n",
                  profile.half_lengths[i] * 1e3, profile.sigma_pp[i]);
    out << line;
  }
}

}  // namespace nvcoil
