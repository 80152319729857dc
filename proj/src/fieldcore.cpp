#include "nvcoil/fieldcore.hpp"

#include <limits>

namespace nvcoil {

void validate(const LoopTurn& turn) {
  if (!(turn.radius > 0.0))
    throw ValidationError("radius", "turn radius must be > 0");
  if (!(turn.current >= 0.0))
    throw ValidationError("current", "turn current must be >= 0");
  if (!std::isfinite(turn.phase))
    throw ValidationError("phase", "turn phase must be finite");
}

FieldSample loop_field(const LoopTurn& turn, double r, double z) {
  validate(turn);
  if (r < 0.0) throw std::domain_error("loop_field: r must be >= 0");

  const double a = turn.radius;
  const double zz = z - turn.z_pos;
  const double dist = std::hypot(r - a, zz);
  if (dist <= kFilamentGuard)
    throw SingularityError("loop_field: evaluation point on the filament");

  double br_amp = 0.0;
  double bz_amp = 0.0;
  if (r < 1e-12) {
    // on axis: B_r = 0, B_z closed form
    bz_amp = kMu0 * turn.current * a * a /
             (2.0 * std::pow(a * a + zz * zz, 1.5));
  } else {
    const double sum2 = (a + r) * (a + r) + zz * zz;
    const double dif2 = (a - r) * (a - r) + zz * zz;
    const double m = 4.0 * a * r / sum2;
    const auto [K, E] = elliptic_ke(m);
    const double pref = kMu0 * turn.current / (2.0 * std::numbers::pi * std::sqrt(sum2));
    bz_amp = pref * (K + (a * a - r * r - zz * zz) / dif2 * E);
    br_amp = pref * zz / r * (-K + (a * a + r * r + zz * zz) / dif2 * E);
  }

  const std::complex<double> rot = std::polar(1.0, turn.phase);
  FieldSample out;
  out.r = r;
  out.z = z;
  out.br = br_amp * rot;
  out.bz = bz_amp * rot;
  out.magnitude = std::hypot(std::abs(out.br), std::abs(out.bz));
  return out;
}

FieldSample superpose(std::span<const LoopTurn> turns, double r, double z) {
  FieldSample out;
  out.r = r;
  out.z = z;
  for (const LoopTurn& turn : turns) {
    const FieldSample one = loop_field(turn, r, z);
    out.br += one.br;
    out.bz += one.bz;
  }
  out.magnitude = std::hypot(std::abs(out.br), std::abs(out.bz));
  return out;
}

double source_current(double power_w, double impedance_ohm) {
  if (!(impedance_ohm > 0.0))
    throw std::domain_error("source_current: impedance must be > 0");
  if (!(power_w >= 0.0))
    throw std::domain_error("source_current: power must be >= 0");
  return std::sqrt(2.0 * power_w / impedance_ohm);
}

double phase_lag(double turn_radius, double wavelength) {
  if (!(wavelength > 0.0))
    throw std::domain_error("phase_lag: wavelength must be > 0");
  if (!(turn_radius >= 0.0))
    throw std::domain_error("phase_lag: radius must be >= 0");
  return (2.0 * std::numbers::pi * turn_radius / wavelength) * 2.0 * std::numbers::pi;
}

RfConstants rf_constants(double f0_hz, double delta_f_hz, double lightspeed) {
  if (!(f0_hz > 0.0) || !(delta_f_hz > 0.0) || !(lightspeed > 0.0))
    throw std::domain_error("rf_constants: inputs must be > 0");
  RfConstants out;
  out.q_factor = f0_hz / delta_f_hz;
  out.ringing_time_s = out.q_factor / (std::numbers::pi * f0_hz);
  out.wavelength_m = lightspeed / f0_hz;
  return out;
}

}  // namespace nvcoil
