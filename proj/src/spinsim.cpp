#include "nvcoil/spinsim.hpp"

namespace nvcoil {

namespace detail {

double sine_integral(double x) {
  const double ax = std::abs(x);
  double si;
  if (ax <= 20.0) {
    // power series sum (-1)^k x^(2k+1) / ((2k+1)(2k+1)!)
    double term = ax;
    double sum = ax;
    for (int k = 1; k < 80; ++k) {
      term *= -ax * ax / ((2.0 * k) * (2.0 * k + 1.0));
      sum += term / (2.0 * k + 1.0);
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    si = sum;
  } else {
    // Si(x) = pi/2 - f(x) cos x - g(x) sin x, asymptotic auxiliary series
    const double inv2 = 1.0 / (ax * ax);
    double f = 1.0, g = 1.0;
    double term_f = 1.0, term_g = 1.0;
    for (int k = 1; k <= 10; ++k) {
      term_f *= -(2.0 * k) * (2.0 * k - 1.0) * inv2;
      term_g *= -(2.0 * k) * (2.0 * k + 1.0) * inv2;
      f += term_f;
      g += term_g;
    }
    f /= ax;
    g *= inv2;
    si = std::numbers::pi / 2.0 - f * std::cos(ax) - g * std::sin(ax);
  }
  return x < 0.0 ? -si : si;
}

}  // namespace detail

void validate(const RabiModel& model) {
  if (!(model.omega0 > 0.0))
    throw ValidationError("omega0", "nominal Rabi frequency must be > 0");
  if (!(model.delta_zeta >= 0.0))
    throw ValidationError("delta_zeta", "width must be >= 0");
}

namespace {

void check_times(const Eigen::ArrayXd& times) {
  if (times.size() > 0 && times.minCoeff() < 0.0)
    throw std::invalid_argument("times must be >= 0");
}

}  // namespace

Eigen::ArrayXd rabi_closed_form(const RabiModel& model,
                                const Eigen::ArrayXd& times) {
  validate(model);
  check_times(times);
  const double rate = model.omega0 * model.delta_zeta;  // 1 / T_R
  return model.amplitude * (-rate * times).exp() * (model.omega0 * times).cos() +
         model.offset;
}

Eigen::ArrayXd rabi_lorentzian_numeric(const RabiModel& model,
                                       const Eigen::ArrayXd& times,
                                       double truncation, int n_nodes) {
  validate(model);
  check_times(times);
  if (!(model.delta_zeta > 0.0))
    throw ValidationError("delta_zeta", "numeric ensemble needs delta_zeta > 0");
  if (!(truncation >= 10.0))
    throw ValidationError("truncation", "must be >= 10 half-widths");
  if (n_nodes < 1001 || n_nodes % 2 == 0)
    throw ValidationError("n_nodes", "must be odd and >= 1001");

  const double dz = model.delta_zeta;
  const double limit = truncation * dz;
  const double h = 2.0 * limit / (n_nodes - 1);

  Eigen::ArrayXd zeta(n_nodes), weight(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    zeta[i] = -limit + i * h;
    weight[i] = (i == 0 || i == n_nodes - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
  }
  const Eigen::ArrayXd density =
      (dz / std::numbers::pi) / (dz * dz + zeta.square());
  const Eigen::ArrayXd w = weight * density * (h / 3.0);

  Eigen::ArrayXd out(times.size());
  for (Eigen::Index i = 0; i < times.size(); ++i) {
    const double t = times[i];
    const double core = (w * (model.omega0 * (1.0 + zeta) * t).cos()).sum();
    // clipped tails: p(zeta) ~ dz / (pi zeta^2), whose oscillatory integral
    // over [limit, inf) reduces to the sine integral; the sin components of
    // the two tails cancel by symmetry
    const double b = model.omega0 * t;
    const double tail_core =
        b == 0.0 ? 1.0 / limit
                 : std::cos(b * limit) / limit -
                       b * (std::numbers::pi / 2.0 - detail::sine_integral(b * limit));
    const double tail =
        (2.0 * dz / std::numbers::pi) * std::cos(model.omega0 * t) * tail_core;
    out[i] = model.amplitude * (core + tail) + model.offset;
  }
  return out;
}

Eigen::ArrayXd rabi_from_field_map(std::span<const FieldSample> samples,
                                   std::span<const double> weights,
                                   const NvConstants& constants,
                                   double drive_scale,
                                   const Eigen::ArrayXd& times,
                                   RabiCoupling coupling) {
  check_times(times);
  if (samples.size() != weights.size())
    throw std::invalid_argument("rabi_from_field_map: length mismatch");
  if (samples.empty())
    throw std::invalid_argument("rabi_from_field_map: empty field map");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0))
      throw std::invalid_argument("rabi_from_field_map: weights must be >= 0");
    total += w;
  }
  if (!(total > 0.0))
    throw std::invalid_argument("rabi_from_field_map: total weight is zero");

  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(times.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (weights[i] == 0.0) continue;
    const double b = coupling == RabiCoupling::FullMagnitude
                         ? samples[i].magnitude
                         : std::abs(samples[i].br);
    const double omega = 2.0 * std::numbers::pi *
                         constants.gyromagnetic_hz_per_t * drive_scale * b;
    out += (weights[i] / total) * (omega * times).cos();
  }
  return out;
}

double resonance_to_bias(double resonance_hz, ZeemanBranch branch,
                         const NvConstants& constants) {
  const double d = constants.zero_field_split_hz;
  if (branch == ZeemanBranch::Lower && resonance_hz > d)
    throw std::domain_error(
        "resonance_to_bias: lower branch needs resonance <= zero-field split");
  if (branch == ZeemanBranch::Upper && resonance_hz < d)
    throw std::domain_error(
        "resonance_to_bias: upper branch needs resonance >= zero-field split");
  return std::abs(resonance_hz - d) / constants.gyromagnetic_hz_per_t;
}

Eigen::ArrayXd baseline_correct(const Eigen::ArrayXd& signal,
                                const Eigen::ArrayXd& reference) {
  if (signal.size() != reference.size())
    throw std::invalid_argument("baseline_correct: length mismatch");
  return signal - reference;
}

}  // namespace nvcoil
