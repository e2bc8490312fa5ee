#include <string>

#include "doctest.h"
#include "escat/config.hpp"
#include "escat/errors.hpp"

using namespace escat;

TEST_SUITE("config") {

TEST_CASE("defaults survive an empty config") {
  const RunConfig c = parse_config_text("");
  CHECK(c.beam.model == BeamModel::plane_pulsed);
  CHECK(c.beam.wavelength_nm == 800.0);
  CHECK(c.birth_mode == "threshold");
  CHECK(c.n_theta == 32);
  CHECK(c.omega_min == 0.05);
  CHECK(c.omega_max == 10.0);
  CHECK(c.sigma_nm == 0.1);
  CHECK(c.components.empty());
  CHECK(c.n_samples == 4096);
  CHECK_FALSE(c.seed_set);
  CHECK(c.model == "both");
  CHECK(c.directory == "out");
}

TEST_CASE("a full file parses into the expected values") {
  const std::string text = R"(# run description
[beam]
model = focused_pulsed
wavelength_nm = 800
peak_intensity_W_cm2 = 1e19
fwhm_fs = 35
waist_over_lambda = 3
carrier_phase = 0.25

[electron]
birth_mode = explicit_time   ; inline comment
birth_threshold_W_cm2 = 2e16
birth_position = 0 0 1.5
initial_momentum = 0.1 0 -0.2
birth_time_fs = -40
steps_per_period = 2000

[grids]
n_theta = 16
n_phi = 8
n_omega = 64
omega_min = 0.02
omega_max = 4

[wavepacket]
sigma_angstrom = 2.5
center_momentum = 0 0 0.01
component1 = 1 0  0 0 0
component2 = 0 1  0 0 0.005

[ensemble]
n_samples = 512
seed = 7
model = incoherent

[output]
directory = run_a
)";
  const RunConfig c = parse_config_text(text);
  CHECK(c.beam.model == BeamModel::focused_pulsed);
  CHECK(c.beam.peak_intensity_W_cm2 == 1e19);
  CHECK(c.beam.carrier_phase == 0.25);
  CHECK(c.birth_mode == "explicit_time");
  CHECK(c.birth_position.z == 1.5);
  CHECK(c.initial_momentum.z == -0.2);
  CHECK(c.birth_time_fs == -40.0);
  CHECK(c.steps_per_period == 2000.0);
  CHECK(c.n_theta == 16);
  CHECK(c.omega_max == 4.0);
  CHECK(c.sigma_nm == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(c.center_momentum.z == 0.01);
  REQUIRE(c.components.size() == 2);
  CHECK(c.components[1].amplitude_im == 1.0);
  CHECK(c.components[1].dp.z == 0.005);
  CHECK(c.n_samples == 512);
  CHECK(c.seed == 7);
  CHECK(c.seed_set);
  CHECK(c.model == "incoherent");
  CHECK(c.directory == "run_a");
}

TEST_CASE("unknown keys are rejected by name") {
  CHECK_THROWS_WITH_AS(parse_config_text("[beam]\nwavelenght_nm = 800\n"),
                       "unknown key [beam] wavelenght_nm", ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[grids]\nn_thetas = 4\n"),
                       "unknown key [grids] n_thetas", ConfigError);
  CHECK_THROWS_AS(parse_config_text("[lens]\nf = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("wavelength_nm = 800\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[beam]\nwavelength_nm\n"), ConfigError);
}

TEST_CASE("bad values name the key path") {
  try {
    parse_config_text("[beam]\nwavelength_nm = eight hundred\n");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("[beam] wavelength_nm") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("[electron]\nbirth_position = 1 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[electron]\nbirth_position = 1 2 3 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[grids]\nn_omega = -4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[grids]\nn_omega = 4.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[ensemble]\nseed = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[ensemble]\nmodel = mixed\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[electron]\nbirth_mode = sometimes\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[beam]\nmodel = bessel\n"), ConfigError);
}

TEST_CASE("resolved values are cross checked") {
  CHECK_THROWS_AS(parse_config_text("[beam]\nwavelength_nm = -800\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[electron]\nsteps_per_period = 100\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[grids]\nomega_min = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[grids]\nomega_min = 2\nomega_max = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[wavepacket]\nsigma_nm = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[ensemble]\nn_samples = 0\n"), ConfigError);
  CHECK_THROWS_AS(
      parse_config_text("[wavepacket]\ncomponent1 = 1 0 0 0 0\ncomponent3 = 1 0 0 0 0\n"),
      ConfigError);
  CHECK_THROWS_AS(parse_config_text("[wavepacket]\nsigma_nm = 0.1\nsigma_angstrom = 1\n"),
                  ConfigError);
}

TEST_CASE("overrides update single keys") {
  RunConfig c = parse_config_text("[ensemble]\nseed = 3\n");
  apply_override(c, "beam.peak_intensity_W_cm2=2e18");
  CHECK(c.beam.peak_intensity_W_cm2 == 2e18);
  apply_override(c, "ensemble.n_samples=128");
  CHECK(c.n_samples == 128);
  apply_override(c, "electron.initial_momentum=0 0 0.3");
  CHECK(c.initial_momentum.z == 0.3);
  CHECK(c.seed == 3);

  RunConfig sup = parse_config_text("[wavepacket]\ncomponent1 = 1 0 0 0 0\n");
  apply_override(sup, "wavepacket.component2=0 1 0 0 0.01");
  REQUIRE(sup.components.size() == 2);
  CHECK(sup.components[1].dp.z == 0.01);

  CHECK_THROWS_AS(apply_override(c, "beam.bandwidth=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "peak_intensity_W_cm2=2e18"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "beam.peak_intensity_W_cm2"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "grids.n_omega=1"), ConfigError);
}

TEST_CASE("serialization is canonical and the hash tracks every value") {
  const RunConfig base = parse_config_text("");
  const std::string s = serialize_config(base);
  CHECK(s.find("[beam]") != std::string::npos);
  CHECK(s.find("model = plane_pulsed") != std::string::npos);
  CHECK(s.find("sigma_nm = ") != std::string::npos);

  // Same resolved values, different spelling in the source file.
  const RunConfig spelled =
      parse_config_text("[wavepacket]\nsigma_angstrom = 1\n");
  const RunConfig direct = parse_config_text("[wavepacket]\nsigma_nm = 0.1\n");
  CHECK(serialize_config(spelled) == serialize_config(direct));
  CHECK(config_hash(spelled) == config_hash(direct));
  CHECK(config_hash(spelled) == config_hash(base));

  // Any value change moves the hash.
  RunConfig tweaked = base;
  tweaked.omega_max = 10.000000001;
  CHECK(config_hash(tweaked) != config_hash(base));
  tweaked = base;
  tweaked.seed = 1;
  CHECK(config_hash(tweaked) != config_hash(base));
  tweaked = base;
  tweaked.directory = "elsewhere";
  CHECK(config_hash(tweaked) != config_hash(base));
  tweaked = base;
  tweaked.components.push_back({});
  CHECK(config_hash(tweaked) != config_hash(base));

  CHECK(config_hash(base).size() == 16);

  // Round trip: parsing the serialization reproduces the hash.
  RunConfig seeded = base;
  seeded.seed = 99;
  seeded.seed_set = true;
  const RunConfig reparsed = parse_config_text(serialize_config(seeded));
  CHECK(config_hash(reparsed) == config_hash(seeded));
}

}  // TEST_SUITE
