#include "doctest.h"

#include <cmath>
#include <vector>

#include "escat/errors.hpp"
#include "escat/thomson_cloud.hpp"
#include "escat/units.hpp"

using namespace escat;

TEST_SUITE("thomson_cloud") {

TEST_CASE("point charge reduces to the dipole pattern") {
  const GaussianCloud point{0.0, 1.0};
  CHECK(cloud_intensity(point, {0.0, 0.0}) == 0.0);
  CHECK(cloud_intensity(point, {M_PI, 1.3}) < 1e-30);
  CHECK(cloud_intensity(point, {M_PI / 2.0, 0.0}) == 1.0);
  CHECK(cloud_intensity(point, {M_PI / 2.0, M_PI}) == doctest::Approx(1.0).epsilon(1e-15));
  const double theta = 0.7;
  CHECK(cloud_intensity(point, {theta, 2.1}) ==
        doctest::Approx(std::sin(theta) * std::sin(theta)).epsilon(1e-15));
  CHECK(cloud_suppression(point, {0.3, 4.0}) == 1.0);
}

TEST_CASE("forward emission is invariant under cloud size") {
  // Along the drive direction every volume element oscillates in phase with
  // the wave it re-emits, so the phase mismatch vanishes identically and the
  // exponent is exactly zero in doubles.
  for (double r0 : {0.0, 0.5, 3.14, 100.0}) {
    const GaussianCloud cloud{r0, 1.0};
    CHECK(cloud_suppression(cloud, {M_PI / 2.0, 0.0}) == 1.0);
    CHECK(cloud_intensity(cloud, {M_PI / 2.0, 0.0}) == 1.0);
  }
}

TEST_CASE("perpendicular suppression at the benchmark sizes") {
  // lambda = 2 pi in normalized units, so kappa = 1.
  const Direction perp{M_PI / 2.0, M_PI / 2.0};

  const GaussianCloud half{M_PI, 1.0};  // r0 = lambda / 2
  const double s_half = cloud_suppression(half, perp);
  CHECK(s_half == doctest::Approx(std::exp(-M_PI * M_PI)).epsilon(1e-12));
  CHECK(s_half == doctest::Approx(5.1723e-5).epsilon(1e-4));
  CHECK(cloud_intensity(half, perp) == doctest::Approx(s_half).epsilon(1e-15));

  const GaussianCloud full{2.0 * M_PI, 1.0};  // r0 = lambda
  const double s_full = cloud_suppression(full, perp);
  CHECK(s_full == doctest::Approx(std::exp(-4.0 * M_PI * M_PI)).epsilon(1e-12));
  CHECK(s_full < 1e-17);
  CHECK(s_full > 1e-18);
}

TEST_CASE("only the product kappa r0 matters") {
  const Direction d{1.1, 2.5};
  CHECK(cloud_suppression({2.0, 3.0}, d) == cloud_suppression({3.0, 2.0}, d));
  CHECK(cloud_suppression({6.0, 1.0}, d) == cloud_suppression({2.0, 3.0}, d));
}

TEST_CASE("suppression decreases with size away from forward") {
  const std::vector<Direction> dirs = {{0.0, 0.0}, {M_PI / 2.0, M_PI / 2.0},
                                       {M_PI / 2.0, M_PI}, {2.2, 0.4}};
  for (const Direction& d : dirs) {
    double prev = 1.0;
    for (double r0 : {0.5, 1.0, 2.0, 4.0}) {
      const double s = cloud_suppression({r0, 1.0}, d);
      CHECK(s < prev);
      prev = s;
    }
  }
}

TEST_CASE("total efficiency is 1 for a point and decays with size") {
  CHECK(cloud_total_efficiency({0.0, 1.0}) == 1.0);

  const double quarter = cloud_total_efficiency({M_PI / 2.0, 1.0});
  const double half = cloud_total_efficiency({M_PI, 1.0});
  const double full = cloud_total_efficiency({2.0 * M_PI, 1.0});
  CHECK(quarter < 1.0);
  CHECK(half < quarter);
  CHECK(full < half);

  // Large clouds radiate only into the narrow forward lobe; by kappa r0 = 20
  // the remaining fraction is well under a percent.
  CHECK(cloud_total_efficiency({20.0, 1.0}) < 1e-2);
  CHECK(cloud_total_efficiency({20.0, 1.0}) > 0.0);
}

TEST_CASE("efficiency scan tabulates totals and direction ratios") {
  const std::vector<double> r0s = {0.0, M_PI, 2.0 * M_PI};
  const std::vector<Direction> dirs = {{M_PI / 2.0, 0.0},
                                       {M_PI / 2.0, M_PI / 2.0},
                                       {0.0, 0.0},
                                       {M_PI / 2.0, M_PI}};
  const EfficiencyScan scan = efficiency_scan(r0s, dirs, 1.0);

  REQUIRE(scan.totals.size() == r0s.size());
  REQUIRE(scan.ratios.size() == r0s.size());
  for (const auto& row : scan.ratios) REQUIRE(row.size() == dirs.size());

  for (std::size_t j = 0; j < dirs.size(); ++j) CHECK(scan.ratios[0][j] == 1.0);
  CHECK(scan.totals[0] == 1.0);

  const double q = M_PI * M_PI;  // (kappa r0)^2 for r0 = lambda / 2
  CHECK(scan.ratios[1][0] == 1.0);
  CHECK(scan.ratios[1][1] == doctest::Approx(std::exp(-q)).epsilon(1e-12));
  CHECK(scan.ratios[1][2] == doctest::Approx(std::exp(-q)).epsilon(1e-12));
  CHECK(scan.ratios[1][3] == doctest::Approx(std::exp(-2.0 * q)).epsilon(1e-12));
  CHECK(scan.ratios[2][1] == doctest::Approx(std::exp(-4.0 * q)).epsilon(1e-12));

  CHECK(scan.totals[1] == doctest::Approx(cloud_total_efficiency({M_PI, 1.0})).epsilon(1e-15));
}

TEST_CASE("invalid clouds and scans are rejected") {
  CHECK_THROWS_AS(cloud_suppression({-0.1, 1.0}, {1.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(cloud_suppression({1.0, 0.0}, {1.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(cloud_suppression({1.0, -2.0}, {1.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(cloud_total_efficiency({std::nan(""), 1.0}), ConfigError);
  CHECK_THROWS_AS(efficiency_scan({}, {{1.0, 1.0}}, 1.0), ConfigError);
  CHECK_THROWS_AS(efficiency_scan({1.0}, {}, 1.0), ConfigError);
  CHECK_THROWS_AS(efficiency_scan({-1.0}, {{1.0, 1.0}}, 1.0), ConfigError);
}

}  // TEST_SUITE
