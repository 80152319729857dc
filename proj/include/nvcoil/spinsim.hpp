#pragma once

#include <Eigen/Dense>
#include <span>

#include "nvcoil/fieldcore.hpp"

// Ensemble Rabi signal synthesis. A spin packet driven at relative detuning
// zeta oscillates at Omega(zeta) = Omega0 * (1 + zeta); averaging over a
// Lorentzian zeta-distribution of half-width-at-half-maximum delta_zeta gives
// the exponentially damped cosine
//
//   S(t) = A * exp(-t / T_R) * cos(Omega0 t) + B,   T_R = 1 / (Omega0 * delta_zeta).
//
// rabi_lorentzian_numeric reproduces the same ensemble by direct quadrature
// and serves as the independent cross-check of that identity.

namespace nvcoil {

struct RabiModel {
  double omega0 = 2.0 * std::numbers::pi * 690e3;  // rad/s
  double delta_zeta = 0.0;                         // dimensionless, >= 0
  double amplitude = 1.0;
  double offset = 0.0;

  /// Ensemble decay constant; infinite when delta_zeta = 0.
  double decay_time() const {
    return delta_zeta > 0.0 ? 1.0 / (omega0 * delta_zeta)
                            : std::numeric_limits<double>::infinity();
  }
};

struct NvConstants {
  double zero_field_split_hz = 2.87e9;       // D
  double gyromagnetic_hz_per_t = 2.8024e10;  // gamma / 2pi
};

enum class ZeemanBranch { Lower, Upper };  // omega = D -/+ gamma Bz

/// How a field sample couples to the spin drive.
enum class RabiCoupling {
  FullMagnitude,   // Omega proportional to |B|
  TransverseToZ,   // Omega proportional to the component perpendicular to z
};

void validate(const RabiModel& model);

Eigen::ArrayXd rabi_closed_form(const RabiModel& model,
                                const Eigen::ArrayXd& times);

/// Ensemble average by Simpson quadrature of the Lorentzian over
/// [-truncation*delta_zeta, +truncation*delta_zeta], with the clipped tails
/// restored by a closed-form correction of their leading 1/zeta^2 behaviour.
/// Requires truncation >= 10 and odd n_nodes >= 1001.
Eigen::ArrayXd rabi_lorentzian_numeric(const RabiModel& model,
                                       const Eigen::ArrayXd& times,
                                       double truncation = 50.0,
                                       int n_nodes = 20001);

/// Weighted cosine ensemble from a field map: Omega_i = 2 pi gamma *
/// drive_scale * B_i, signal(t) = sum_i w_i cos(Omega_i t) / sum_i w_i.
Eigen::ArrayXd rabi_from_field_map(std::span<const FieldSample> samples,
                                   std::span<const double> weights,
                                   const NvConstants& constants,
                                   double drive_scale,
                                   const Eigen::ArrayXd& times,
                                   RabiCoupling coupling = RabiCoupling::FullMagnitude);

/// Bias field from one Zeeman-shifted resonance: Bz = |f - D| / gamma.
double resonance_to_bias(double resonance_hz, ZeemanBranch branch,
                         const NvConstants& constants = {});

/// Elementwise signal - reference.
Eigen::ArrayXd baseline_correct(const Eigen::ArrayXd& signal,
                                const Eigen::ArrayXd& reference);

namespace detail {
/// Sine integral Si(x) = int_0^x sin(u)/u du, |error| ~ 1e-14.
double sine_integral(double x);
}  // namespace detail

}  // namespace nvcoil
