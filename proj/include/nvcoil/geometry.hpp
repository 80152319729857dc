#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nvcoil/fieldcore.hpp"

// Catalog of the field-forming systems modeled in this project, plus JSON
// ingest of user-defined coil geometries. Extended conductors (the planar
// annulus and the foil strips) are discretized into filament stacks with the
// turn current split uniformly across the filaments.

namespace nvcoil {

enum class CatalogId {
  PlanarAntenna,   // A: single-turn planar annulus, 3-7.8 mm diameter
  StripCylinder,   // C: three coaxial foil-strip turns, 3 mm tall
  Helmholtz,       // D: wire pair, spacing = radius = 1.5 mm
  Barrel,          // E: two mirrored three-turn cones, large bases inward
  NestedBarrel,    // F: barrel pair nested inside a wider barrel pair
};

/// Parses a one-letter geometry name. "B" (the dielectric resonator) is
/// recognized but rejected: it needs a full-wave solver.
CatalogId parse_catalog_id(const std::string& letter);
std::string catalog_letter(CatalogId id);

/// Winding parameters of one barrel cone pair. Turn j of a cone sits at
/// z = z0 + j*pitch with radius r_in + (turns_per_cone-1-j)*dr, so the widest
/// turn is nearest the midplane; the mirrored cone completes the barrel.
struct BarrelParams {
  double r_in = 1.5e-3;           // m, innermost turn radius
  double dr = 0.156e-3;           // m, radial increment per turn
  double z0 = 0.462e-3;           // m, axial offset of the turn nearest the midplane
  double pitch = 0.459e-3;        // m, axial spacing between turns of one cone
  int turns_per_cone = 3;
  double nested_offset = 0.406e-3;  // m, extra radius of the outer pair (F only)
};

/// Named filament stack with its drive and overall envelope.
struct CoilGeometry {
  std::string name;
  std::vector<LoopTurn> turns;
  DriveSpec drive;
  double envelope_d = 0.0;  // m, overall diameter
  double envelope_h = 0.0;  // m, overall height
  int physical_turns = 0;   // winding count (filament count for split conductors differs)
};

/// Optional replacements for the catalog defaults.
struct CatalogOverrides {
  std::optional<DriveSpec> drive;
  std::optional<BarrelParams> barrel;        // E, and the inner pair of F
  std::optional<BarrelParams> outer_barrel;  // F only
  std::optional<double> loop_radius;         // D
  std::optional<double> loop_spacing;        // D
};

/// Smallest turn radius allowed anywhere: the 3 mm diamond access bore.
inline constexpr double kBoreRadius = 1.5e-3 * (1.0 - 1e-9);

void validate(const BarrelParams& p, double half_height);

CoilGeometry build_catalog(CatalogId id, const CatalogOverrides& overrides = {});
CoilGeometry build_catalog(const std::string& letter,
                           const CatalogOverrides& overrides = {});

/// Reference values for the dielectric-resonator system (catalog letter B),
/// which is outside this model's reach: winding count 1, envelope 30 x 3 mm,
/// inhomogeneity 0.34 % / 2.9 % over the 0.25 / 0.6 mm half-lengths.
struct ReferenceRow {
  std::string name;
  int n_w;
  double d_mm, h_mm;
  double sigma_025, sigma_060;
};
ReferenceRow dielectric_resonator_reference();

// -- filament stack builders ------------------------------------------------

std::vector<LoopTurn> planar_annulus(double r_inner, double r_outer,
                                     int n_filaments, double total_current,
                                     double wavelength);

std::vector<LoopTurn> strip_cylinder(double r_inner, double radial_step,
                                     int n_strips, double height,
                                     int filaments_per_strip,
                                     double current_per_strip,
                                     double wavelength);

std::vector<LoopTurn> loop_pair(double radius, double spacing, double current,
                                double wavelength);

std::vector<LoopTurn> barrel_cones(const BarrelParams& p, double current,
                                   double wavelength);

// -- JSON config ------------------------------------------------------------

/// Parses a geometry config document:
///   { "name": str,
///     "drive": { "power_w", "impedance_ohm", "frequency_ghz",
///                "lightspeed_mps" (optional) },
///     "turns": [ { "radius_mm", "z_mm", "current_a" (optional),
///                  "phase": "auto" | number(rad) } ],
///     "envelope": { "d_mm", "h_mm" } }
/// Units are converted to SI; "auto" phase applies the per-turn phase lag;
/// a missing current defaults to the source current of the drive.
/// Throws ValidationError naming the offending field path.
CoilGeometry parse_geometry_config(const std::string& json_text);

/// Inverse of parse_geometry_config (phases serialized as numbers).
std::string serialize_geometry(const CoilGeometry& geometry);

}  // namespace nvcoil
