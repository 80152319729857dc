#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>

#include "nvcoil/errors.hpp"

// Parameter recovery for decaying-cosine (Rabi) and Gaussian-dip (ODMR)
// signals by damped least squares, with deterministic spectral initial
// guesses. Fits are pure functions of their inputs.

namespace nvcoil {

/// Recovered parameters of A * exp(-t/T) * cos(2 pi f t + q) + B,
/// normalized to A >= 0, f > 0, q in (-pi, pi].
struct FitResult {
  double amplitude = 0.0;
  double offset = 0.0;
  double decay_time = 0.0;  // s
  double frequency = 0.0;   // Hz
  double phase = 0.0;       // rad
  double residual_rms = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Recovered parameters of baseline - contrast * exp(-(f-center)^2/(2 width^2)).
/// width is the Gaussian standard deviation (see kOdmrWidthConvention).
struct OdmrFit {
  double center = 0.0;    // Hz
  double width = 0.0;     // Hz, sigma
  double contrast = 0.0;
  double baseline = 0.0;
  double residual_rms = 0.0;
  bool converged = false;
};

inline constexpr const char* kOdmrWidthConvention = "sigma";

/// Thrown when the damped least squares loop exhausts its iteration budget;
/// carries the best parameters reached.
class FitNotConverged : public std::runtime_error {
 public:
  FitNotConverged(const std::string& what, FitResult best)
      : std::runtime_error(what), best_(best) {}
  const FitResult& best() const noexcept { return best_; }

 private:
  FitResult best_;
};

/// Fits a decaying cosine to uniformly sampled data. The frequency seed comes
/// from the discrete-spectrum peak, the decay seed from a line fit to the log
/// of the analytic-signal envelope. Throws NoOscillationError when no
/// spectral peak rises above the noise floor.
FitResult fit_decaying_cosine(const Eigen::ArrayXd& times,
                              const Eigen::ArrayXd& values);

/// Lorentzian ensemble width from a fitted frequency and decay time:
/// delta_zeta = 1 / (2 pi f T).
double delta_zeta(double frequency_hz, double decay_time_s);

/// Fits a Gaussian dip. Throws NoDipError when the minimum does not sit
/// at least three noise deviations below the baseline.
OdmrFit fit_gaussian_dip(const Eigen::ArrayXd& frequencies,
                         const Eigen::ArrayXd& values);

struct WaveformCycle {
  double peak_to_peak = 0.0;  // V
  double period = 0.0;        // s
};

struct WaveformErrors {
  double amplitude_error_pct = 0.0;  // 100 * sd / mean of peak-to-peak
  double frequency_error_pct = 0.0;  // 100 * sd / mean of 1 / period
};

WaveformErrors waveform_error_stats(std::span<const WaveformCycle> cycles);

}  // namespace nvcoil
