#include "nvcoil/geometry.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace nvcoil {

using nlohmann::json;

CatalogId parse_catalog_id(const std::string& letter) {
  if (letter == "A") return CatalogId::PlanarAntenna;
  if (letter == "C") return CatalogId::StripCylinder;
  if (letter == "D") return CatalogId::Helmholtz;
  if (letter == "E") return CatalogId::Barrel;
  if (letter == "F") return CatalogId::NestedBarrel;
  if (letter == "B")
    throw std::domain_error("geometry B requires full-wave solver: out of scope");
  throw std::domain_error("unknown geometry id '" + letter +
                          "' (expected one of A, C, D, E, F)");
}

std::string catalog_letter(CatalogId id) {
  switch (id) {
    case CatalogId::PlanarAntenna: return "A";
    case CatalogId::StripCylinder: return "C";
    case CatalogId::Helmholtz: return "D";
    case CatalogId::Barrel: return "E";
    case CatalogId::NestedBarrel: return "F";
  }
  throw std::logic_error("catalog_letter: bad id");
}

void validate(const BarrelParams& p, double half_height) {
  if (!(p.r_in >= kBoreRadius))
    throw ValidationError("r_in", "innermost barrel radius must keep the 3 mm bore clear");
  if (!(p.dr > 0.0)) throw ValidationError("dr", "radial increment must be > 0");
  if (!(p.z0 > 0.0)) throw ValidationError("z0", "axial offset must be > 0");
  if (!(p.pitch > 0.0)) throw ValidationError("pitch", "axial pitch must be > 0");
  if (p.turns_per_cone < 1)
    throw ValidationError("turns_per_cone", "need at least one turn per cone");
  const double top = p.z0 + (p.turns_per_cone - 1) * p.pitch;
  if (top > half_height + 1e-15)
    throw ValidationError("z0", "cone extends past the envelope half-height");
}

ReferenceRow dielectric_resonator_reference() {
  return ReferenceRow{"B", 1, 30.0, 3.0, 0.34, 2.9};
}

std::vector<LoopTurn> planar_annulus(double r_inner, double r_outer,
                                     int n_filaments, double total_current,
                                     double wavelength) {
  if (n_filaments < 1) throw ValidationError("n_filaments", "need >= 1 filament");
  if (!(r_outer > r_inner) || !(r_inner > 0.0))
    throw ValidationError("radius", "need 0 < r_inner < r_outer");
  std::vector<LoopTurn> turns;
  turns.reserve(n_filaments);
  const double current = total_current / n_filaments;
  for (int k = 0; k < n_filaments; ++k) {
    const double a = n_filaments == 1
                         ? 0.5 * (r_inner + r_outer)
                         : r_inner + k * (r_outer - r_inner) / (n_filaments - 1);
    turns.push_back({a, 0.0, current, phase_lag(a, wavelength)});
  }
  return turns;
}

std::vector<LoopTurn> strip_cylinder(double r_inner, double radial_step,
                                     int n_strips, double height,
                                     int filaments_per_strip,
                                     double current_per_strip,
                                     double wavelength) {
  if (filaments_per_strip < 1)
    throw ValidationError("filaments_per_strip", "need >= 1 filament per strip");
  std::vector<LoopTurn> turns;
  turns.reserve(static_cast<std::size_t>(n_strips) * filaments_per_strip);
  const double current = current_per_strip / filaments_per_strip;
  for (int s = 0; s < n_strips; ++s) {
    const double a = r_inner + s * radial_step;
    const double phi = phase_lag(a, wavelength);
    for (int j = 0; j < filaments_per_strip; ++j) {
      const double z = filaments_per_strip == 1
                           ? 0.0
                           : -height / 2.0 + j * height / (filaments_per_strip - 1);
      turns.push_back({a, z, current, phi});
    }
  }
  return turns;
}

std::vector<LoopTurn> loop_pair(double radius, double spacing, double current,
                                double wavelength) {
  const double phi = phase_lag(radius, wavelength);
  return {{radius, -spacing / 2.0, current, phi},
          {radius, +spacing / 2.0, current, phi}};
}

std::vector<LoopTurn> barrel_cones(const BarrelParams& p, double current,
                                   double wavelength) {
  std::vector<LoopTurn> turns;
  turns.reserve(2 * p.turns_per_cone);
  for (int j = 0; j < p.turns_per_cone; ++j) {
    const double a = p.r_in + (p.turns_per_cone - 1 - j) * p.dr;
    const double z = p.z0 + j * p.pitch;
    const double phi = phase_lag(a, wavelength);
    turns.push_back({a, +z, current, phi});
    turns.push_back({a, -z, current, phi});
  }
  return turns;
}

namespace {

void check_bore(const CoilGeometry& g) {
  for (std::size_t i = 0; i < g.turns.size(); ++i) {
    if (g.turns[i].radius < kBoreRadius)
      throw ValidationError("turns[" + std::to_string(i) + "].radius",
                            "turn obstructs the 3 mm diamond access bore");
  }
}

}  // namespace

CoilGeometry build_catalog(CatalogId id, const CatalogOverrides& overrides) {
  CoilGeometry g;
  g.drive = overrides.drive.value_or(DriveSpec{});
  const double current = source_current(g.drive.power_w, g.drive.impedance_ohm);
  const double lambda = g.drive.wavelength_m();

  switch (id) {
    case CatalogId::PlanarAntenna: {
      // single physical turn spanning the 3-7.8 mm annulus, split into 8 rings
      g.name = "A";
      g.turns = planar_annulus(1.5e-3, 3.9e-3, 8, current, lambda);
      g.envelope_d = 7.8e-3;
      g.envelope_h = 0.018e-3;
      g.physical_turns = 1;
      break;
    }
    case CatalogId::StripCylinder: {
      // 15 um foil + 65 um insulation per wrap -> 80 um radial step
      g.name = "C";
      g.turns = strip_cylinder(1.5e-3, 0.080e-3, 3, 3.0e-3, 15, current, lambda);
      g.envelope_d = 3.0e-3;
      g.envelope_h = 3.0e-3;
      g.physical_turns = 3;
      break;
    }
    case CatalogId::Helmholtz: {
      const double radius = overrides.loop_radius.value_or(1.5e-3);
      const double spacing = overrides.loop_spacing.value_or(radius);
      if (!(radius > 0.0)) throw ValidationError("loop_radius", "must be > 0");
      if (!(spacing > 0.0)) throw ValidationError("loop_spacing", "must be > 0");
      g.name = "D";
      g.turns = loop_pair(radius, spacing, current, lambda);
      g.envelope_d = 3.0e-3;
      g.envelope_h = 1.5e-3;
      g.physical_turns = 2;
      break;
    }
    case CatalogId::Barrel: {
      BarrelParams p = overrides.barrel.value_or(BarrelParams{});
      validate(p, 1.5e-3);
      g.name = "E";
      g.turns = barrel_cones(p, current, lambda);
      g.envelope_d = 4.0e-3;
      g.envelope_h = 3.0e-3;
      g.physical_turns = 2 * p.turns_per_cone;
      break;
    }
    case CatalogId::NestedBarrel: {
      BarrelParams inner = overrides.barrel.value_or(BarrelParams{});
      BarrelParams outer = overrides.outer_barrel.value_or([&] {
        BarrelParams p = inner;
        p.r_in = inner.r_in + inner.nested_offset;
        p.z0 = 0.5e-3;
        p.pitch = 0.5e-3;
        return p;
      }());
      validate(inner, 2.0e-3);
      validate(outer, 2.0e-3);
      g.name = "F";
      g.turns = barrel_cones(inner, current, lambda);
      const auto outer_turns = barrel_cones(outer, current, lambda);
      g.turns.insert(g.turns.end(), outer_turns.begin(), outer_turns.end());
      g.envelope_d = 5.0e-3;
      g.envelope_h = 4.0e-3;
      g.physical_turns = 2 * (inner.turns_per_cone + outer.turns_per_cone);
      break;
    }
  }
  check_bore(g);
  return g;
}

CoilGeometry build_catalog(const std::string& letter,
                           const CatalogOverrides& overrides) {
  return build_catalog(parse_catalog_id(letter), overrides);
}

namespace {

double require_number(const json& node, const std::string& path) {
  if (!node.is_number())
    throw ValidationError(path, "expected a number");
  return node.get<double>();
}

const json& require_field(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(path + "." + key, "missing field");
  return *it;
}

}  // namespace

CoilGeometry parse_geometry_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError("", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("", "top level must be an object");

  CoilGeometry g;
  const json& name = require_field(doc, "name", "");
  if (!name.is_string()) throw ValidationError("name", "expected a string");
  g.name = name.get<std::string>();

  const json& drive = require_field(doc, "drive", "");
  if (!drive.is_object()) throw ValidationError("drive", "expected an object");
  g.drive.power_w = require_number(require_field(drive, "power_w", "drive"),
                                   "drive.power_w");
  g.drive.impedance_ohm = require_number(
      require_field(drive, "impedance_ohm", "drive"), "drive.impedance_ohm");
  g.drive.frequency_hz =
      require_number(require_field(drive, "frequency_ghz", "drive"),
                     "drive.frequency_ghz") * 1e9;
  if (drive.contains("lightspeed_mps"))
    g.drive.lightspeed_mps =
        require_number(drive["lightspeed_mps"], "drive.lightspeed_mps");

  if (!(g.drive.power_w >= 0.0))
    throw ValidationError("drive.power_w", "must be >= 0");
  if (!(g.drive.impedance_ohm > 0.0))
    throw ValidationError("drive.impedance_ohm", "must be > 0");
  if (!(g.drive.frequency_hz > 0.0))
    throw ValidationError("drive.frequency_ghz", "must be > 0");
  if (!(g.drive.lightspeed_mps > 0.0))
    throw ValidationError("drive.lightspeed_mps", "must be > 0");

  const double default_current =
      source_current(g.drive.power_w, g.drive.impedance_ohm);
  const double lambda = g.drive.wavelength_m();

  const json& turns = require_field(doc, "turns", "");
  if (!turns.is_array() || turns.empty())
    throw ValidationError("turns", "expected a nonempty array");
  for (std::size_t i = 0; i < turns.size(); ++i) {
    const std::string path = "turns[" + std::to_string(i) + "]";
    const json& t = turns[i];
    if (!t.is_object()) throw ValidationError(path, "expected an object");
    LoopTurn turn;
    turn.radius =
        require_number(require_field(t, "radius_mm", path), path + ".radius_mm") * 1e-3;
    if (!(turn.radius > 0.0))
      throw ValidationError(path + ".radius_mm", "must be > 0");
    turn.z_pos =
        require_number(require_field(t, "z_mm", path), path + ".z_mm") * 1e-3;
    turn.current = t.contains("current_a")
                       ? require_number(t["current_a"], path + ".current_a")
                       : default_current;
    if (!(turn.current >= 0.0))
      throw ValidationError(path + ".current_a", "must be >= 0");
    const json& phase = require_field(t, "phase", path);
    if (phase.is_string()) {
      if (phase.get<std::string>() != "auto")
        throw ValidationError(path + ".phase", "expected \"auto\" or a number");
      turn.phase = phase_lag(turn.radius, lambda);
    } else {
      turn.phase = require_number(phase, path + ".phase");
      if (!std::isfinite(turn.phase))
        throw ValidationError(path + ".phase", "must be finite");
    }
    g.turns.push_back(turn);
  }

  const json& env = require_field(doc, "envelope", "");
  if (!env.is_object()) throw ValidationError("envelope", "expected an object");
  g.envelope_d =
      require_number(require_field(env, "d_mm", "envelope"), "envelope.d_mm") * 1e-3;
  g.envelope_h =
      require_number(require_field(env, "h_mm", "envelope"), "envelope.h_mm") * 1e-3;
  if (!(g.envelope_d > 0.0)) throw ValidationError("envelope.d_mm", "must be > 0");
  if (!(g.envelope_h > 0.0)) throw ValidationError("envelope.h_mm", "must be > 0");

  g.physical_turns = static_cast<int>(g.turns.size());
  return g;
}

std::string serialize_geometry(const CoilGeometry& g) {
  json doc;
  doc["name"] = g.name;
  doc["drive"] = {{"power_w", g.drive.power_w},
                  {"impedance_ohm", g.drive.impedance_ohm},
                  {"frequency_ghz", g.drive.frequency_hz / 1e9},
                  {"lightspeed_mps", g.drive.lightspeed_mps}};
  json turns = json::array();
  for (const LoopTurn& t : g.turns) {
    turns.push_back({{"radius_mm", t.radius * 1e3},
                     {"z_mm", t.z_pos * 1e3},
                     {"current_a", t.current},
                     {"phase", t.phase}});
  }
  doc["turns"] = std::move(turns);
  doc["envelope"] = {{"d_mm", g.envelope_d * 1e3}, {"h_mm", g.envelope_h * 1e3}};
  return doc.dump(2);
}

}  // namespace nvcoil
