#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "nvcoil/errors.hpp"

// Quasi-static magnetic field of circular current filaments.
//
// Every filament is a circle of radius a centred on the z axis at height z0,
// carrying a sinusoidal current represented as a phasor I*exp(i*phi). Off the
// axis the field of one filament is the classic closed form in the complete
// elliptic integrals K(m), E(m) with
//
//         4 a r
//   m = ----------------- ,
//       (a + r)^2 + (z - z0)^2
//
//   B_z = mu0 I / (2 pi sqrt((a+r)^2 + zz^2)) * [ K + (a^2 - r^2 - zz^2) /
//                                                     ((a-r)^2 + zz^2) * E ]
//   B_r = mu0 I zz / (2 pi r sqrt((a+r)^2 + zz^2)) * [ -K + (a^2 + r^2 + zz^2) /
//                                                          ((a-r)^2 + zz^2) * E ]
//
// All quantities SI. Functions here are pure and safe to call concurrently.

namespace nvcoil {

inline constexpr double kMu0 = 4e-7 * std::numbers::pi;  // T*m/A, exact by convention
inline constexpr double kLightSpeed = 2.99792458e8;      // m/s
inline constexpr double kLightSpeedCompat = 3.0e8;       // m/s, round value used with 104.53 mm

/// One circular current filament.
struct LoopTurn {
  double radius = 0.0;   // m, > 0
  double z_pos = 0.0;    // m
  double current = 0.0;  // A (peak), >= 0
  double phase = 0.0;    // rad
};

/// Drive parameters of the microwave source feeding a coil.
struct DriveSpec {
  double power_w = 10.0;
  double impedance_ohm = 50.0;
  double frequency_hz = 2.87e9;
  double lightspeed_mps = kLightSpeed;

  double wavelength_m() const { return lightspeed_mps / frequency_hz; }
};

/// Field phasor at one point. magnitude is the peak flux density,
/// sqrt(|br|^2 + |bz|^2).
struct FieldSample {
  double r = 0.0;  // m
  double z = 0.0;  // m
  std::complex<double> br{0.0, 0.0};  // T
  std::complex<double> bz{0.0, 0.0};  // T
  double magnitude = 0.0;  // T
};

struct RfConstants {
  double q_factor = 0.0;
  double ringing_time_s = 0.0;  // tau = Q / (pi f0)
  double wavelength_m = 0.0;
};

void validate(const LoopTurn& turn);

/// Complete elliptic integrals K(m), E(m) in the parameter convention
/// (m = k^2), computed by arithmetic-geometric-mean iteration. Converges to
/// full double precision in a handful of iterations for m in [0, 1).
template <typename Scalar>
std::pair<Scalar, Scalar> elliptic_ke(Scalar m) {
  if (!(m >= Scalar(0)) || !(m < Scalar(1)))
    throw std::domain_error("elliptic_ke: parameter m must be in [0, 1)");
  constexpr Scalar eps = std::numeric_limits<Scalar>::epsilon();
  Scalar a = Scalar(1);
  Scalar b = std::sqrt(Scalar(1) - m);
  Scalar c = std::sqrt(m);
  Scalar sum = c * c / Scalar(2);  // accumulates 2^(n-1) c_n^2
  Scalar pow2 = Scalar(1);
  while (std::abs(c) > eps * a) {
    c = (a - b) / Scalar(2);
    const Scalar an = (a + b) / Scalar(2);
    b = std::sqrt(a * b);
    a = an;
    pow2 *= Scalar(2);
    sum += pow2 / Scalar(2) * c * c;
  }
  const Scalar k_complete = std::numbers::pi_v<Scalar> / (Scalar(2) * a);
  const Scalar e_complete = k_complete * (Scalar(1) - sum);
  return {k_complete, e_complete};
}

/// Minimum allowed distance between an evaluation point and a filament.
inline constexpr double kFilamentGuard = 1e-9;  // m

/// Field of a single filament at cylindrical point (r, z), r >= 0.
FieldSample loop_field(const LoopTurn& turn, double r, double z);

/// Complex phasor sum of the per-turn fields over a filament stack.
/// Empty input gives the zero field.
FieldSample superpose(std::span<const LoopTurn> turns, double r, double z);

/// Peak source current I = sqrt(2 P / Z).
double source_current(double power_w, double impedance_ohm);

/// Per-winding phase lag phi = (2 pi R / lambda) * 2 pi.
double phase_lag(double turn_radius, double wavelength);

/// Q = f0/df, ringing time Q/(pi f0), wavelength c/f0.
RfConstants rf_constants(double f0_hz, double delta_f_hz,
                         double lightspeed = kLightSpeed);

}  // namespace nvcoil
