#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "nvcoil/fitting.hpp"
#include "nvcoil/io.hpp"

using namespace nvcoil;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct DecayParams {
  double a, b, t, f, q;  // t in seconds, f in Hz
};

// 16 samples per period over five decay constants
Eigen::ArrayXd sample_times(const DecayParams& p, int per_period = 16,
                            double n_decays = 5.0) {
  const double dt = 1.0 / (p.f * per_period);
  const int n = std::max<int>(32, static_cast<int>(n_decays * p.t / dt) + 1);
  return Eigen::ArrayXd::LinSpaced(n, 0.0, (n - 1) * dt);
}

Eigen::ArrayXd synthesize(const DecayParams& p, const Eigen::ArrayXd& t) {
  return p.a * (-t / p.t).exp() * (kTwoPi * p.f * t + p.q).cos() + p.b;
}

void check_roundtrip(const DecayParams& p, double tol) {
  const Eigen::ArrayXd t = sample_times(p);
  const FitResult fit = fit_decaying_cosine(t, synthesize(p, t));
  CHECK(fit.converged);
  CHECK(fit.amplitude == doctest::Approx(p.a).epsilon(tol));
  CHECK(fit.offset == doctest::Approx(p.b).epsilon(tol));
  CHECK(fit.decay_time == doctest::Approx(p.t).epsilon(tol));
  CHECK(fit.frequency == doctest::Approx(p.f).epsilon(tol));
  CHECK(fit.phase == doctest::Approx(p.q).epsilon(tol));
  CHECK(fit.residual_rms <= 1e-9 * std::abs(p.a));
}

}  // namespace

TEST_CASE("decaying cosine: noiseless round trip of the barrel midplane row") {
  check_roundtrip({5.07, -8.98, 4.37e-6, 690e3, 0.61}, 1e-6);
}

TEST_CASE("decaying cosine: noiseless round trip of the planar surface row") {
  check_roundtrip({133.5, -123.7, 78.6e-9, 6.54e6, 0.36}, 1e-6);
}

TEST_CASE("decaying cosine: constant input raises the no-oscillation error") {
  const Eigen::ArrayXd t = Eigen::ArrayXd::LinSpaced(256, 0.0, 1e-3);
  const Eigen::ArrayXd y = Eigen::ArrayXd::Constant(256, -3.2);
  CHECK_THROWS_AS(fit_decaying_cosine(t, y), NoOscillationError);
}

TEST_CASE("decaying cosine: scale equivariance") {
  const DecayParams p{2.0, 0.5, 3e-6, 800e3, 0.4};
  const Eigen::ArrayXd t = sample_times(p);
  const Eigen::ArrayXd y = synthesize(p, t);
  const FitResult base = fit_decaying_cosine(t, y);
  const double k = 13.7;
  const FitResult scaled = fit_decaying_cosine(t, k * y);
  CHECK(scaled.amplitude == doctest::Approx(k * base.amplitude).epsilon(1e-9));
  CHECK(scaled.offset == doctest::Approx(k * base.offset).epsilon(1e-9));
  CHECK(scaled.residual_rms <= k * (base.residual_rms + 1e-12));
  CHECK(scaled.decay_time == doctest::Approx(base.decay_time).epsilon(1e-9));
  CHECK(scaled.frequency == doctest::Approx(base.frequency).epsilon(1e-9));
  CHECK(scaled.phase == doctest::Approx(base.phase).epsilon(1e-9));
}

TEST_CASE("decaying cosine: time-unit equivariance") {
  const DecayParams p{1.5, -0.2, 2e-6, 1.2e6, -0.3};
  const Eigen::ArrayXd t = sample_times(p);
  const Eigen::ArrayXd y = synthesize(p, t);
  const FitResult base = fit_decaying_cosine(t, y);
  const double k = 1e6;  // rescale seconds to microseconds
  const FitResult rescaled = fit_decaying_cosine(k * t, y);
  CHECK(rescaled.decay_time == doctest::Approx(k * base.decay_time).epsilon(1e-9));
  CHECK(rescaled.frequency == doctest::Approx(base.frequency / k).epsilon(1e-9));
  CHECK(rescaled.amplitude == doctest::Approx(base.amplitude).epsilon(1e-9));
  CHECK(rescaled.offset == doctest::Approx(base.offset).epsilon(1e-9));
  CHECK(rescaled.phase == doctest::Approx(base.phase).epsilon(1e-9));
}

TEST_CASE("decaying cosine: moderate noise still recovers the parameters") {
  const DecayParams p{5.07, -8.98, 4.37e-6, 690e3, 0.61};
  const Eigen::ArrayXd t = sample_times(p);
  const Eigen::ArrayXd clean = synthesize(p, t);
  const Eigen::ArrayXd noise =
      0.05 * p.a * deterministic_gaussian(42, t.size());
  const FitResult fit = fit_decaying_cosine(t, clean + noise);
  CHECK(std::abs(fit.frequency / p.f - 1.0) < 0.01);
  CHECK(std::abs(fit.decay_time / p.t - 1.0) < 0.10);
}

TEST_CASE("delta zeta: table rows and limits") {
  CHECK(delta_zeta(690e3, 4.37e-6) == doctest::Approx(0.0528).epsilon(1e-3));
  CHECK(delta_zeta(6.54e6, 78.6e-9) == doctest::Approx(0.310).epsilon(1e-3));
  // no decay means no inhomogeneity
  CHECK(delta_zeta(690e3, 1e6) <= 1e-12);
  CHECK_THROWS_AS(delta_zeta(0.0, 1e-6), std::domain_error);
  CHECK_THROWS_AS(delta_zeta(690e3, 0.0), std::domain_error);
  CHECK_THROWS_AS(delta_zeta(690e3, -1.0), std::domain_error);
}

TEST_CASE("gaussian dip: noiseless round trip of the barrel resonance") {
  const double center = 2.838e9, width = 4.732e6;
  const double baseline = 1.0, contrast = 0.03;
  const Eigen::ArrayXd f =
      Eigen::ArrayXd::LinSpaced(401, center - 40e6, center + 40e6);
  const Eigen::ArrayXd y =
      baseline - contrast * (-(f - center).square() / (2.0 * width * width)).exp();
  const OdmrFit fit = fit_gaussian_dip(f, y);
  CHECK(fit.converged);
  CHECK(fit.center == doctest::Approx(center).epsilon(1e-6));
  CHECK(fit.width == doctest::Approx(width).epsilon(1e-6));
  CHECK(fit.contrast == doctest::Approx(contrast).epsilon(1e-6));
  CHECK(fit.baseline == doctest::Approx(baseline).epsilon(1e-6));
  CHECK(std::string(kOdmrWidthConvention) == "sigma");
}

TEST_CASE("gaussian dip: symmetric data pins the center exactly") {
  const double center = 2.9e9;
  const int n = 101;  // odd grid symmetric about the center
  const Eigen::ArrayXd f = Eigen::ArrayXd::LinSpaced(n, center - 30e6, center + 30e6);
  const Eigen::ArrayXd y =
      2.0 - 0.05 * (-(f - center).square() / (2.0 * 25e12)).exp();
  const OdmrFit fit = fit_gaussian_dip(f, y);
  CHECK(fit.center == center);
}

TEST_CASE("gaussian dip: flat data raises the no-dip error") {
  const Eigen::ArrayXd f = Eigen::ArrayXd::LinSpaced(64, 2.8e9, 3.0e9);
  const Eigen::ArrayXd y = Eigen::ArrayXd::Constant(64, 1.0);
  CHECK_THROWS_AS(fit_gaussian_dip(f, y), NoDipError);

  // pure noise without a dip structure also fails the visibility gate
  const Eigen::ArrayXd jitter = 1.0 + 0.001 * deterministic_gaussian(3, 64);
  CHECK_THROWS_AS(fit_gaussian_dip(f, jitter), NoDipError);
}

TEST_CASE("waveform error stats: identical cycles, jittered cycles, errors") {
  std::vector<WaveformCycle> same(10, {0.2, 1.0 / 2.838e9});
  const WaveformErrors zero = waveform_error_stats(same);
  CHECK(zero.amplitude_error_pct == 0.0);
  CHECK(zero.frequency_error_pct == 0.0);

  // 1% relative Gaussian jitter on the amplitudes of 1e5 cycles
  const Eigen::ArrayXd noise = deterministic_gaussian(7, 100000);
  std::vector<WaveformCycle> jittered(100000);
  for (int i = 0; i < 100000; ++i)
    jittered[i] = {0.2 * (1.0 + 0.01 * noise[i]), 1.0 / 2.838e9};
  const WaveformErrors stat = waveform_error_stats(jittered);
  CHECK(stat.amplitude_error_pct == doctest::Approx(1.0).epsilon(0.02));
  CHECK(stat.frequency_error_pct == 0.0);

  std::vector<WaveformCycle> one{{0.2, 1e-9}};
  CHECK_THROWS_AS(waveform_error_stats(one), std::invalid_argument);
  std::vector<WaveformCycle> zero_mean{{1.0, 1e-9}, {-1.0, 1e-9}};
  CHECK_THROWS_AS(waveform_error_stats(zero_mean), std::domain_error);
}

TEST_CASE("waveform error stats: frequency error comes from the period spread") {
  std::vector<WaveformCycle> cycles;
  const Eigen::ArrayXd noise = deterministic_gaussian(11, 50000);
  const double f0 = 2.838e9;
  for (int i = 0; i < 50000; ++i)
    cycles.push_back({0.2, 1.0 / (f0 * (1.0 + 0.0041 * noise[i]))});
  const WaveformErrors stat = waveform_error_stats(cycles);
  CHECK(stat.frequency_error_pct == doctest::Approx(0.41).epsilon(0.03));
}
