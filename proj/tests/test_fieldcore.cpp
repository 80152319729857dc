#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "nvcoil/fieldcore.hpp"
#include "nvcoil/geometry.hpp"

using namespace nvcoil;

namespace {

constexpr double kPi = std::numbers::pi;

// Brute-force Biot-Savart over straight segments; the independent oracle for
// the elliptic-integral closed form.
std::pair<double, double> segment_oracle(double a, double z0, double current,
                                         double r, double z, int segments) {
  double bx = 0.0, bz = 0.0;
  const double dtheta = 2.0 * kPi / segments;
  for (int k = 0; k < segments; ++k) {
    const double theta = (k + 0.5) * dtheta;
    const double px = a * std::cos(theta);
    const double py = a * std::sin(theta);
    // dl = a * dtheta * (-sin, cos, 0)
    const double dlx = -a * dtheta * std::sin(theta);
    const double dly = a * dtheta * std::cos(theta);
    const double rx = r - px;
    const double ry = -py;
    const double rz = z - z0;
    const double dist2 = rx * rx + ry * ry + rz * rz;
    const double inv3 = 1.0 / (dist2 * std::sqrt(dist2));
    bx += (dly * rz) * inv3;           // (dl x r)_x, dlz = 0
    bz += (dlx * ry - dly * rx) * inv3;
  }
  const double scale = kMu0 * current / (4.0 * kPi);
  return {scale * bx, scale * bz};
}

}  // namespace

TEST_CASE("elliptic integrals: identity case, singular endpoint, AGM oracle value") {
  const auto [k0, e0] = elliptic_ke(0.0);
  CHECK(k0 == doctest::Approx(kPi / 2.0).epsilon(1e-15));
  CHECK(e0 == doctest::Approx(kPi / 2.0).epsilon(1e-15));

  CHECK_THROWS_AS(elliptic_ke(1.0), std::domain_error);
  CHECK_THROWS_AS(elliptic_ke(-0.1), std::domain_error);
  CHECK_THROWS_AS(elliptic_ke(1.5), std::domain_error);

  // frozen AGM values for m = 0.5
  const auto [k5, e5] = elliptic_ke(0.5);
  CHECK(k5 == doctest::Approx(1.8540746773013719).epsilon(1e-12));
  CHECK(e5 == doctest::Approx(1.3506438810476755).epsilon(1e-12));
}

TEST_CASE("elliptic integrals: E <= K across the domain") {
  for (double m = 0.0; m < 1.0; m += 0.037) {
    const auto [k, e] = elliptic_ke(m);
    CHECK(e <= k + 1e-15);
    CHECK(e > 0.0);
  }
}

TEST_CASE("loop field: on-axis closed form at the center") {
  const LoopTurn turn{1e-3, 0.0, 1.0, 0.0};
  const FieldSample s = loop_field(turn, 0.0, 0.0);
  CHECK(s.bz.real() == doctest::Approx(kMu0 / (2.0 * 1e-3)).epsilon(1e-14));
  CHECK(s.bz.real() == doctest::Approx(6.2832e-4).epsilon(1e-4));
  CHECK(std::abs(s.br) < 1e-15 * s.magnitude + 1e-300);
}

TEST_CASE("loop field: phase pi negates the phasor") {
  const LoopTurn plus{1e-3, 0.0, 1.0, 0.0};
  const LoopTurn minus{1e-3, 0.0, 1.0, kPi};
  const FieldSample a = loop_field(plus, 0.4e-3, 0.2e-3);
  const FieldSample b = loop_field(minus, 0.4e-3, 0.2e-3);
  CHECK(b.bz.real() == doctest::Approx(-a.bz.real()).epsilon(1e-12));
  CHECK(b.br.real() == doctest::Approx(-a.br.real()).epsilon(1e-12));
  CHECK(b.magnitude == doctest::Approx(a.magnitude).epsilon(1e-14));
}

TEST_CASE("loop field: matches the segment-discretization oracle off axis") {
  const LoopTurn turn{1e-3, 0.0, 1.0, 0.0};
  const FieldSample s = loop_field(turn, 0.5e-3, 0.7e-3);
  const auto [br_ref, bz_ref] = segment_oracle(1e-3, 0.0, 1.0, 0.5e-3, 0.7e-3, 1000000);
  CHECK(s.br.real() == doctest::Approx(br_ref).epsilon(1e-6));
  CHECK(s.bz.real() == doctest::Approx(bz_ref).epsilon(1e-6));
}

TEST_CASE("loop field: singularity guard and validation") {
  const LoopTurn turn{1e-3, 0.0, 1.0, 0.0};
  CHECK_THROWS_AS(loop_field(turn, 1e-3, 0.0), SingularityError);
  CHECK_THROWS_AS(loop_field(turn, 1e-3 + 1e-10, 0.0), SingularityError);
  CHECK_THROWS_AS(loop_field({-1e-3, 0, 1, 0}, 0, 0), ValidationError);
  CHECK_THROWS_AS(loop_field({1e-3, 0, -1, 0}, 0, 0), ValidationError);
}

TEST_CASE("loop field: mirror symmetry about the turn plane") {
  const LoopTurn turn{1.5e-3, 0.4e-3, 0.7, 0.3};
  for (const auto [r, d] : {std::pair{0.2e-3, 0.1e-3}, {1.0e-3, 0.8e-3},
                            {3.0e-3, 2.0e-3}}) {
    const FieldSample up = loop_field(turn, r, turn.z_pos + d);
    const FieldSample dn = loop_field(turn, r, turn.z_pos - d);
    CHECK(up.bz.real() == doctest::Approx(dn.bz.real()).epsilon(1e-12));
    CHECK(up.br.real() == doctest::Approx(-dn.br.real()).epsilon(1e-12));
  }
}

TEST_CASE("loop field: dipole limit on axis at z = 10 a") {
  const double a = 1e-3;
  const LoopTurn turn{a, 0.0, 1.0, 0.0};
  const double z = 10.0 * a;
  const FieldSample s = loop_field(turn, 0.0, z);
  const double dipole = kMu0 * 1.0 * a * a / (2.0 * z * z * z);
  CHECK(std::abs(s.bz.real() / dipole - 1.0) < 0.015);
}

TEST_CASE("superpose: empty sum, linearity, coincident turns") {
  CHECK(superpose(std::span<const LoopTurn>{}, 1e-3, 0.0).magnitude == 0.0);

  const std::vector<LoopTurn> one{{1e-3, 0.0, 1.0, 0.2}};
  const std::vector<LoopTurn> two{{1e-3, 0.0, 1.0, 0.2}, {1e-3, 0.0, 1.0, 0.2}};
  const FieldSample s1 = superpose(one, 0.3e-3, 0.5e-3);
  const FieldSample s2 = superpose(two, 0.3e-3, 0.5e-3);
  CHECK(s2.magnitude == doctest::Approx(2.0 * s1.magnitude).epsilon(1e-14));

  // scaling all currents scales the magnitude exactly
  std::vector<LoopTurn> scaled = two;
  for (auto& t : scaled) t.current *= 3.25;
  const FieldSample s3 = superpose(scaled, 0.3e-3, 0.5e-3);
  CHECK(s3.magnitude == doctest::Approx(3.25 * s2.magnitude).epsilon(1e-12));
}

TEST_CASE("superpose: Helmholtz pair center field from the on-axis closed form") {
  const double a = 1.5e-3, current = 0.6325;
  const std::vector<LoopTurn> pair{{a, -0.75e-3, current, 0.0},
                                   {a, +0.75e-3, current, 0.0}};
  const FieldSample s = superpose(pair, 0.0, 0.0);
  const double one_coil =
      kMu0 * current * a * a / (2.0 * std::pow(a * a + 0.75e-3 * 0.75e-3, 1.5));
  CHECK(s.magnitude == doctest::Approx(2.0 * one_coil).epsilon(1e-14));
  CHECK(s.magnitude == doctest::Approx(3.79e-4).epsilon(1e-3));
}

TEST_CASE("divergence-free field: central-difference estimate shrinks quadratically") {
  const CoilGeometry geom = build_catalog(CatalogId::Helmholtz);
  auto div_estimate = [&](double r, double z, double h) {
    const auto brp = superpose(geom, r + h, z).br.real() * (r + h);
    const auto brm = superpose(geom, r - h, z).br.real() * (r - h);
    const auto bzp = superpose(geom, r, z + h).bz.real();
    const auto bzm = superpose(geom, r, z - h).bz.real();
    return (brp - brm) / (2.0 * h * r) + (bzp - bzm) / (2.0 * h);
  };
  for (const auto [r, z] : {std::pair{0.4e-3, 0.3e-3}, {0.8e-3, -0.5e-3},
                            {1.0e-3, 1.0e-3}}) {
    const double h = 1e-6;
    const double mag = superpose(geom, r, z).magnitude;
    const double d1 = std::abs(div_estimate(r, z, h));
    const double d2 = std::abs(div_estimate(r, z, h / 2.0));
    CHECK(d1 * h <= 1e-4 * mag);
    // truncation error is O(h^2); allow slack plus a roundoff floor
    CHECK(d2 <= 0.35 * d1 + 1e-9 * mag / h);
  }
}

TEST_CASE("source current: paper operating point and limiting cases") {
  CHECK(source_current(10.0, 50.0) == doctest::Approx(0.6325).epsilon(2e-4));
  CHECK(source_current(0.0, 50.0) == 0.0);
  CHECK(source_current(50.0, 100.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(source_current(10.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(source_current(10.0, -5.0), std::domain_error);
  CHECK_THROWS_AS(source_current(-1.0, 50.0), std::domain_error);
}

TEST_CASE("phase lag: zero radius, full-wave circumference, operating point") {
  CHECK(phase_lag(0.0, 0.10453) == 0.0);
  const double lambda = 0.10453;
  CHECK(phase_lag(lambda / (2.0 * kPi), lambda) ==
        doctest::Approx(2.0 * kPi).epsilon(1e-15));
  CHECK(phase_lag(1.5e-3, 104.53e-3) == doctest::Approx(0.5665).epsilon(2e-4));
  CHECK_THROWS_AS(phase_lag(1e-3, 0.0), std::domain_error);
  CHECK_THROWS_AS(phase_lag(-1e-3, 1.0), std::domain_error);
}

TEST_CASE("rf constants: Q, ringing time, wavelength") {
  const RfConstants rf = rf_constants(2.87e9, 20e6, kLightSpeedCompat);
  CHECK(rf.q_factor == 143.5);
  CHECK(rf.ringing_time_s == doctest::Approx(15.9e-9).epsilon(1e-2));
  CHECK(rf.wavelength_m == doctest::Approx(104.53e-3).epsilon(1e-4));

  const RfConstants exact = rf_constants(2.87e9, 20e6);
  CHECK(exact.wavelength_m == doctest::Approx(104.46e-3).epsilon(1e-4));

  CHECK_THROWS_AS(rf_constants(0.0, 20e6), std::domain_error);
  CHECK_THROWS_AS(rf_constants(2.87e9, 0.0), std::domain_error);
  CHECK_THROWS_AS(rf_constants(2.87e9, 20e6, 0.0), std::domain_error);
}

TEST_CASE("loop field maintains the magnitude invariant with nonzero phase") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const LoopTurn turn{0.5e-3 + 2e-3 * uni(rng), -1e-3 + 2e-3 * uni(rng),
                        2.0 * uni(rng), 6.0 * uni(rng) - 3.0};
    const double r = 2.5e-3 * uni(rng);
    const double z = -2e-3 + 4e-3 * uni(rng);
    if (std::hypot(r - turn.radius, z - turn.z_pos) < 1e-5) continue;
    const FieldSample s = loop_field(turn, r, z);
    CHECK(s.magnitude ==
          doctest::Approx(std::hypot(std::abs(s.br), std::abs(s.bz)))
              .epsilon(1e-12));
  }
}
