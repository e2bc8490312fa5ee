#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "escat/errors.hpp"
#include "escat/laser.hpp"

using namespace escat;

namespace {

BeamConfig base_config(BeamModel model) {
  BeamConfig c;
  c.model = model;
  c.wavelength_nm = 800.0;
  c.peak_intensity_W_cm2 = 2e18;
  c.fwhm_fs = 35.0;
  c.waist_over_lambda = 3.0;
  return c;
}

// Central-difference divergence of the electric or magnetic field at (pos, t),
// step lambda/200.
template <typename Pick>
double divergence(const FieldEvaluator& f, Pick pick, const Vec3& pos, double t) {
  const double h = 2.0 * M_PI / 200.0;
  double div = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    Vec3 dp = pos, dm = pos;
    (axis == 0 ? dp.x : axis == 1 ? dp.y : dp.z) += h;
    (axis == 0 ? dm.x : axis == 1 ? dm.y : dm.z) -= h;
    const Vec3 fp = pick(f(dp, t));
    const Vec3 fm = pick(f(dm, t));
    const double comp =
        axis == 0 ? fp.x - fm.x : axis == 1 ? fp.y - fm.y : fp.z - fm.z;
    div += comp / (2.0 * h);
  }
  return div;
}

}  // namespace

TEST_SUITE("laser") {

TEST_CASE("plane wave field at the envelope peak") {
  auto cfg = base_config(BeamModel::plane_pulsed);
  FieldEvaluator f(cfg);
  CHECK(f.a0() == doctest::Approx(0.967242542895611).epsilon(1e-12));

  const FieldSample s = f({0.0, 0.0, 0.0}, 0.0);
  CHECK(s.e.z == doctest::Approx(f.a0()).epsilon(1e-14));
  CHECK(s.e.x == 0.0);
  CHECK(s.e.y == 0.0);
  CHECK(s.b.y == doctest::Approx(-f.a0()).epsilon(1e-14));
  CHECK(s.b.x == 0.0);
  CHECK(s.b.z == 0.0);
}

TEST_CASE("carrier phase shifts the field under the envelope") {
  auto cfg = base_config(BeamModel::plane_pulsed);
  cfg.carrier_phase = M_PI / 2.0;
  FieldEvaluator f(cfg);
  CHECK(std::abs(f({0.0, 0.0, 0.0}, 0.0).e.z) < 1e-14);
  CHECK(f({0.0, 0.0, 0.0}, -M_PI / 2.0).e.z ==
        doctest::Approx(f.a0() * f.field_envelope(-M_PI / 2.0)).epsilon(1e-12));
}

TEST_CASE("pulsed plane wave depends on eta only") {
  FieldEvaluator f(base_config(BeamModel::plane_pulsed));
  for (double eta : {-40.0, -3.0, 0.7, 55.0}) {
    const FieldSample a = f({0.0, 0.0, 0.0}, eta);
    const FieldSample b = f({123.4, 5.0, -8.0}, eta + 123.4);
    CHECK(a.e.z == doctest::Approx(b.e.z).epsilon(1e-13));
    CHECK(a.b.y == doctest::Approx(b.b.y).epsilon(1e-13));
  }
}

TEST_CASE("intensity envelope has the configured fwhm") {
  auto cfg = base_config(BeamModel::plane_pulsed);
  FieldEvaluator f(cfg);
  const double half = 0.5 * f.fwhm_norm();
  CHECK(f.local_intensity_W_cm2({0.0, 0.0, 0.0}, half) ==
        doctest::Approx(0.5 * cfg.peak_intensity_W_cm2).epsilon(1e-12));
  CHECK(f.local_intensity_W_cm2({0.0, 0.0, 0.0}, -half) ==
        doctest::Approx(0.5 * cfg.peak_intensity_W_cm2).epsilon(1e-12));
  CHECK(f.local_intensity_W_cm2({0.0, 0.0, 0.0}, 0.0) ==
        doctest::Approx(cfg.peak_intensity_W_cm2).epsilon(1e-14));
}

TEST_CASE("plane infinite has unit envelope everywhere") {
  FieldEvaluator f(base_config(BeamModel::plane_infinite));
  CHECK(f.local_intensity_W_cm2({0.0, 0.0, 0.0}, 1e6) ==
        doctest::Approx(2e18).epsilon(1e-14));
  const FieldSample s = f({0.0, 0.0, 0.0}, 1e4);
  CHECK(s.b.y == doctest::Approx(-s.e.z).epsilon(1e-14));
}

TEST_CASE("focused beam reduces to plane wave on axis at focus") {
  FieldEvaluator fp(base_config(BeamModel::plane_pulsed));
  FieldEvaluator ff(base_config(BeamModel::focused_pulsed));
  for (double t : {-10.0, 0.0, 2.5}) {
    CHECK(ff({0.0, 0.0, 0.0}, t).e.z ==
          doctest::Approx(fp({0.0, 0.0, 0.0}, t).e.z).epsilon(1e-13));
  }
}

TEST_CASE("focused beam intensity falls off transversely and longitudinally") {
  auto cfg = base_config(BeamModel::focused_pulsed);
  FieldEvaluator f(cfg);
  const double w0 = f.waist_norm();
  // e^-2 of peak at one waist radius off axis.
  CHECK(f.local_intensity_W_cm2({0.0, w0, 0.0}, 0.0) ==
        doctest::Approx(cfg.peak_intensity_W_cm2 * std::exp(-2.0)).epsilon(1e-12));
  // Half of peak one Rayleigh range downstream (on axis, at the local
  // envelope peak eta = 0).
  const double xr = 0.5 * w0 * w0;
  CHECK(f.local_intensity_W_cm2({xr, 0.0, 0.0}, xr) ==
        doctest::Approx(0.5 * cfg.peak_intensity_W_cm2).epsilon(1e-12));
}

TEST_CASE("focused beam fields are divergence free to first order") {
  FieldEvaluator f(base_config(BeamModel::focused_pulsed));
  const double a0 = f.a0();
  const double w0 = f.waist_norm();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(-40.0, 40.0);
  std::uniform_real_distribution<double> ur(-w0, w0);
  std::uniform_real_distribution<double> ut(-1.2 * f.fwhm_norm(), 1.2 * f.fwhm_norm());
  for (int k = 0; k < 100; ++k) {
    const Vec3 p{ux(rng), ur(rng), ur(rng)};
    const double t = p.x + ut(rng);
    CHECK(std::abs(divergence(f, [](const FieldSample& s) { return s.e; }, p, t)) <
          1e-3 * a0);
    CHECK(std::abs(divergence(f, [](const FieldSample& s) { return s.b; }, p, t)) <
          1e-3 * a0);
  }
}

TEST_CASE("plane wave invariants and pulse tails") {
  FieldEvaluator f(base_config(BeamModel::plane_pulsed));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int k = 0; k < 50; ++k) {
    const FieldSample s = f({u(rng), u(rng), u(rng)}, u(rng));
    CHECK(dot(s.e, s.b) == 0.0);
    CHECK(norm(s.e) == doctest::Approx(norm(s.b)).epsilon(1e-15));
  }
  // Fields are dead beyond four FWHM from the peak.
  for (double sgn : {-1.0, 1.0}) {
    const double eta = sgn * 4.0 * f.fwhm_norm() * 1.0000001;
    CHECK(norm(f({0.0, 0.0, 0.0}, eta).e) < 1e-8 * f.a0());
  }
}

TEST_CASE("on-axis amplitude at the Rayleigh range") {
  FieldEvaluator f(base_config(BeamModel::focused_pulsed));
  const double xr = 0.5 * f.waist_norm() * f.waist_norm();
  // Scan the carrier within one cycle of the local envelope peak.
  double amp = 0.0;
  for (int k = 0; k < 400; ++k) {
    const double t = xr - M_PI + 2.0 * M_PI * k / 400.0;
    amp = std::max(amp, std::abs(f({xr, 0.0, 0.0}, t).e.z));
  }
  CHECK(amp == doctest::Approx(f.a0() / std::sqrt(2.0)).epsilon(0.02));
}

TEST_CASE("energy flux through the focal plane matches the paraxial reference") {
  FieldEvaluator f(base_config(BeamModel::focused_pulsed));
  const double w0 = f.waist_norm();
  // Cycle-averaged S_x = <E_z^2> integrated over the focal plane at the
  // envelope peak; reference is the analytic paraxial value a0^2 pi w0^2 / 4.
  const int n = 160;
  const double half = 3.2 * w0, h = 2.0 * half / n;
  double flux = 0.0;
  for (int iy = 0; iy < n; ++iy) {
    for (int iz = 0; iz < n; ++iz) {
      const Vec3 p{0.0, -half + (iy + 0.5) * h, -half + (iz + 0.5) * h};
      // Average the carrier over a cycle via two quadrature phases.
      const double c = f(p, 0.0).e.z;
      const double s = f(p, -M_PI / 2.0).e.z;
      flux += 0.5 * (c * c + s * s) * h * h;
    }
  }
  const double ref = f.a0() * f.a0() * M_PI * w0 * w0 / 4.0;
  CHECK(flux == doctest::Approx(ref).epsilon(0.05));
}

TEST_CASE("beam model names round trip") {
  for (auto m : {BeamModel::plane_infinite, BeamModel::plane_pulsed,
                 BeamModel::focused_pulsed}) {
    CHECK(beam_model_from_string(to_string(m)) == m);
  }
  CHECK_THROWS_AS(beam_model_from_string("gaussian"), ConfigError);
}

TEST_CASE("config validation rejects bad parameters") {
  auto cfg = base_config(BeamModel::plane_pulsed);
  cfg.peak_intensity_W_cm2 = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = base_config(BeamModel::plane_pulsed);
  cfg.fwhm_fs = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = base_config(BeamModel::focused_pulsed);
  cfg.waist_over_lambda = 0.4;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  // Infinite plane wave ignores the pulse duration.
  cfg = base_config(BeamModel::plane_infinite);
  cfg.fwhm_fs = -1.0;
  CHECK_NOTHROW(cfg.validate());
}

}  // TEST_SUITE
