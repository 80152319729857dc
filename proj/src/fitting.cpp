#include "nvcoil/fitting.hpp"

#include <algorithm>
#include <complex>
#include <numbers>
#include <vector>

namespace nvcoil {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// -- damped least squares -----------------------------------------------

struct LmOutcome {
  Eigen::VectorXd params;
  double ssr = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Minimizes |residual(p)|^2. The callback fills residuals and the Jacobian
/// for the current parameters. Relative step tolerance 1e-10, 200 iterations.
template <typename Fill>
LmOutcome levenberg_marquardt(Eigen::VectorXd p, Eigen::Index n_points,
                              Fill&& fill) {
  constexpr int kMaxIter = 200;
  constexpr double kStepTol = 1e-10;

  const Eigen::Index n_params = p.size();
  Eigen::VectorXd r(n_points);
  Eigen::MatrixXd jac(n_points, n_params);

  fill(p, r, jac);
  double ssr = r.squaredNorm();
  double lambda = 1e-3;
  LmOutcome out{p, ssr, false, 0};

  for (int iter = 1; iter <= kMaxIter; ++iter) {
    out.iterations = iter;
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;

    bool stepped = false;
    Eigen::VectorXd p_new;
    for (int tries = 0; tries < 40; ++tries) {
      Eigen::MatrixXd damped = jtj;
      for (Eigen::Index i = 0; i < n_params; ++i)
        damped(i, i) += lambda * std::max(jtj(i, i), 1e-30);
      const Eigen::VectorXd delta = damped.ldlt().solve(-jtr);
      p_new = out.params + delta;
      Eigen::VectorXd r_new(n_points);
      Eigen::MatrixXd jac_new(n_points, n_params);
      fill(p_new, r_new, jac_new);
      const double ssr_new = r_new.squaredNorm();
      if (std::isfinite(ssr_new) && ssr_new <= ssr) {
        lambda = std::max(lambda / 3.0, 1e-14);
        const double rel_step =
            delta.cwiseQuotient(p_new.cwiseAbs().cwiseMax(1e-300)).cwiseAbs().maxCoeff();
        const double improvement = ssr - ssr_new;
        out.params = p_new;
        r = r_new;
        jac = jac_new;
        ssr = ssr_new;
        out.ssr = ssr;
        stepped = true;
        if (rel_step < kStepTol || improvement <= 1e-14 * std::max(ssr, 1e-300)) {
          out.converged = true;
          return out;
        }
        break;
      }
      lambda *= 5.0;
    }
    if (!stepped) {
      // no damping level improves the fit: stationary point
      out.converged = true;
      return out;
    }
  }
  return out;  // iteration budget exhausted, converged stays false
}

// -- spectral seeds -----------------------------------------------------

std::vector<std::complex<double>> dft(const Eigen::ArrayXd& y) {
  const Eigen::Index n = y.size();
  std::vector<std::complex<double>> out(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    std::complex<double> acc{0.0, 0.0};
    const double w = -kTwoPi * k / static_cast<double>(n);
    for (Eigen::Index j = 0; j < n; ++j)
      acc += y[j] * std::polar(1.0, w * j);
    out[k] = acc;
  }
  return out;
}

/// Envelope of y via the analytic signal (negative frequencies zeroed).
Eigen::ArrayXd hilbert_envelope(const Eigen::ArrayXd& y,
                                const std::vector<std::complex<double>>& spectrum) {
  const Eigen::Index n = y.size();
  std::vector<std::complex<double>> half(n, {0.0, 0.0});
  half[0] = spectrum[0];
  for (Eigen::Index k = 1; k < (n + 1) / 2; ++k) half[k] = 2.0 * spectrum[k];
  if (n % 2 == 0) half[n / 2] = spectrum[n / 2];
  Eigen::ArrayXd env(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    std::complex<double> acc{0.0, 0.0};
    const double w = kTwoPi * j / static_cast<double>(n);
    for (Eigen::Index k = 0; k < n; ++k)
      acc += half[k] * std::polar(1.0, w * k);
    env[j] = std::abs(acc) / static_cast<double>(n);
  }
  return env;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  return v[mid];
}

}  // namespace

FitResult fit_decaying_cosine(const Eigen::ArrayXd& times,
                              const Eigen::ArrayXd& values) {
  const Eigen::Index n = times.size();
  if (n != values.size())
    throw std::invalid_argument("fit_decaying_cosine: length mismatch");
  if (n < 16)
    throw std::invalid_argument("fit_decaying_cosine: need at least 16 samples");
  const double t0 = times[0];
  const double dt = (times[n - 1] - t0) / static_cast<double>(n - 1);
  if (!(dt > 0.0))
    throw std::invalid_argument("fit_decaying_cosine: times must ascend");

  const double mean = values.mean();
  const Eigen::ArrayXd centered = values - mean;
  const auto spectrum = dft(centered);

  // spectral peak over the positive-frequency bins
  const Eigen::Index half = n / 2;
  Eigen::Index k_peak = 1;
  double peak_mag = 0.0;
  std::vector<double> mags;
  mags.reserve(half);
  for (Eigen::Index k = 1; k <= half; ++k) {
    const double m = std::abs(spectrum[k]);
    mags.push_back(m);
    if (m > peak_mag) { peak_mag = m; k_peak = k; }
  }
  const double floor_mag = median(mags);
  if (!(peak_mag > 0.0) || peak_mag <= 5.0 * floor_mag)
    throw NoOscillationError(
        "fit_decaying_cosine: no spectral peak above the noise floor");

  double k_refined = static_cast<double>(k_peak);
  if (k_peak > 1 && k_peak < half) {
    const double a = std::abs(spectrum[k_peak - 1]);
    const double b = peak_mag;
    const double c = std::abs(spectrum[k_peak + 1]);
    const double denom = a - 2.0 * b + c;
    if (denom < 0.0)
      k_refined += std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
  }
  const double f_seed = k_refined / (static_cast<double>(n) * dt);

  // decay seed from the log-envelope over the central part of the record
  const Eigen::ArrayXd env = hilbert_envelope(centered, spectrum);
  const Eigen::Index lo = std::max<Eigen::Index>(1, n / 20);
  const Eigen::Index hi = std::max<Eigen::Index>(lo + 2, (7 * n) / 10);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  Eigen::Index count = 0;
  for (Eigen::Index j = lo; j < hi; ++j) {
    if (!(env[j] > 0.0)) continue;
    const double x = times[j];
    const double yl = std::log(env[j]);
    sx += x; sy += yl; sxx += x * x; sxy += x * yl;
    ++count;
  }
  double rate_seed = 0.0;
  if (count >= 2) {
    const double denom = count * sxx - sx * sx;
    if (denom > 0.0) rate_seed = -(count * sxy - sx * sy) / denom;
  }
  const double duration = times[n - 1] - t0;
  rate_seed = std::clamp(rate_seed, 1e-3 / duration, 10.0 / dt);

  const double q_seed = std::arg(spectrum[k_peak]) - kTwoPi * f_seed * t0;
  const double a_seed = centered.abs().maxCoeff();

  // parameters: amplitude, offset, decay rate (1/T), frequency, phase
  Eigen::VectorXd p(5);
  p << a_seed, mean, rate_seed, f_seed, q_seed;

  auto fill = [&](const Eigen::VectorXd& pp, Eigen::VectorXd& r,
                  Eigen::MatrixXd& jac) {
    const double A = pp[0], B = pp[1], kap = pp[2], f = pp[3], q = pp[4];
    for (Eigen::Index j = 0; j < n; ++j) {
      const double t = times[j];
      const double damp = std::exp(-kap * t);
      const double arg = kTwoPi * f * t + q;
      const double c = std::cos(arg), s = std::sin(arg);
      r[j] = A * damp * c + B - values[j];
      jac(j, 0) = damp * c;
      jac(j, 1) = 1.0;
      jac(j, 2) = -A * t * damp * c;
      jac(j, 3) = -A * damp * s * kTwoPi * t;
      jac(j, 4) = -A * damp * s;
    }
  };

  const LmOutcome lm = levenberg_marquardt(p, n, fill);

  FitResult out;
  out.amplitude = lm.params[0];
  out.offset = lm.params[1];
  out.decay_time = lm.params[2] != 0.0
                       ? 1.0 / lm.params[2]
                       : std::numeric_limits<double>::infinity();
  out.frequency = lm.params[3];
  out.phase = lm.params[4];
  out.residual_rms = std::sqrt(lm.ssr / static_cast<double>(n));
  out.converged = lm.converged;
  out.iterations = lm.iterations;

  // canonical form: A >= 0, f > 0, q in (-pi, pi]
  if (out.amplitude < 0.0) {
    out.amplitude = -out.amplitude;
    out.phase += std::numbers::pi;
  }
  if (out.frequency < 0.0) {
    out.frequency = -out.frequency;
    out.phase = -out.phase;
  }
  out.phase = std::remainder(out.phase, kTwoPi);
  if (out.phase <= -std::numbers::pi) out.phase += kTwoPi;

  if (!lm.converged)
    throw FitNotConverged("fit_decaying_cosine: iteration budget exhausted", out);
  if (!(out.decay_time > 0.0) || !(out.frequency > 0.0))
    throw FitNotConverged("fit_decaying_cosine: unphysical optimum", out);
  return out;
}

double delta_zeta(double frequency_hz, double decay_time_s) {
  if (!(frequency_hz > 0.0) || !(decay_time_s > 0.0))
    throw std::domain_error("delta_zeta: frequency and decay time must be > 0");
  return 1.0 / (kTwoPi * frequency_hz * decay_time_s);
}

OdmrFit fit_gaussian_dip(const Eigen::ArrayXd& frequencies,
                         const Eigen::ArrayXd& values) {
  const Eigen::Index n = frequencies.size();
  if (n != values.size())
    throw std::invalid_argument("fit_gaussian_dip: length mismatch");
  if (n < 8)
    throw std::invalid_argument("fit_gaussian_dip: need at least 8 samples");

  Eigen::Index i_min = 0;
  double v_min = values[0], v_max = values[0];
  for (Eigen::Index i = 1; i < n; ++i) {
    if (values[i] < v_min) { v_min = values[i]; i_min = i; }
    v_max = std::max(v_max, values[i]);
  }

  // robust noise scale from successive differences
  std::vector<double> diffs;
  diffs.reserve(n - 1);
  for (Eigen::Index i = 1; i < n; ++i)
    diffs.push_back(std::abs(values[i] - values[i - 1]));
  const double noise = 1.4826 * median(std::move(diffs)) / std::numbers::sqrt2;

  const double baseline_seed = v_max;
  const double contrast_seed = baseline_seed - v_min;
  if (!(contrast_seed > 3.0 * noise) || !(contrast_seed > 0.0))
    throw NoDipError("fit_gaussian_dip: no dip below the baseline");

  // half-depth width -> sigma
  const double half_level = baseline_seed - 0.5 * contrast_seed;
  double f_left = frequencies[0], f_right = frequencies[n - 1];
  for (Eigen::Index i = i_min; i-- > 0;)
    if (values[i] > half_level) { f_left = frequencies[i]; break; }
  for (Eigen::Index i = i_min + 1; i < n; ++i)
    if (values[i] > half_level) { f_right = frequencies[i]; break; }
  double sigma_seed = (f_right - f_left) / 2.3548;
  const double span = std::abs(frequencies[n - 1] - frequencies[0]);
  if (!(sigma_seed > 0.0)) sigma_seed = span / 6.0;

  Eigen::VectorXd p(4);
  p << baseline_seed, contrast_seed, frequencies[i_min], sigma_seed;

  auto fill = [&](const Eigen::VectorXd& pp, Eigen::VectorXd& r,
                  Eigen::MatrixXd& jac) {
    const double base = pp[0], con = pp[1], cen = pp[2], sig = pp[3];
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = frequencies[j] - cen;
      const double g = std::exp(-d * d / (2.0 * sig * sig));
      r[j] = base - con * g - values[j];
      jac(j, 0) = 1.0;
      jac(j, 1) = -g;
      jac(j, 2) = -con * g * d / (sig * sig);
      jac(j, 3) = -con * g * d * d / (sig * sig * sig);
    }
  };

  const LmOutcome lm = levenberg_marquardt(p, n, fill);

  OdmrFit out;
  out.baseline = lm.params[0];
  out.contrast = lm.params[1];
  out.center = lm.params[2];
  out.width = std::abs(lm.params[3]);
  out.residual_rms = std::sqrt(lm.ssr / static_cast<double>(n));
  out.converged = lm.converged;
  if (!(out.width > 0.0) || !(out.contrast > 0.0))
    throw NoDipError("fit_gaussian_dip: fit collapsed to no dip");
  return out;
}

WaveformErrors waveform_error_stats(std::span<const WaveformCycle> cycles) {
  if (cycles.size() < 2)
    throw std::invalid_argument("waveform_error_stats: need at least 2 cycles");

  auto spread_pct = [](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    if (mean == 0.0)
      throw std::domain_error("waveform_error_stats: zero mean");
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    return 100.0 * sd / std::abs(mean);
  };

  std::vector<double> amps, freqs;
  amps.reserve(cycles.size());
  freqs.reserve(cycles.size());
  for (const WaveformCycle& c : cycles) {
    if (!(c.period > 0.0))
      throw std::domain_error("waveform_error_stats: periods must be > 0");
    amps.push_back(c.peak_to_peak);
    freqs.push_back(1.0 / c.period);
  }
  return {spread_pct(amps), spread_pct(freqs)};
}

}  // namespace nvcoil
