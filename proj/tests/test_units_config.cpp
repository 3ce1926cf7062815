#include <doctest.h>

#include <cmath>
#include <random>

#include "vacuumcone/config.hpp"
#include "vacuumcone/errors.hpp"
#include "vacuumcone/units.hpp"

using namespace vacuumcone;

TEST_CASE("physical constants are consistent") {
  const auto& k = kConstants;
  CHECK(std::abs(k.c * k.c * k.eps0 * k.mu0 - 1.0) < 1e-12);
  for (double v : {k.c, k.hbar, k.kB, k.eps0, k.mu0}) CHECK(v > 0.0);
}

TEST_CASE("frequency conversion") {
  CHECK(thz_to_rad_per_s(0.0) == 0.0);
  CHECK(thz_to_rad_per_s(1.0) == doctest::Approx(6.283185307e12).epsilon(1e-10));
  CHECK(std::abs(rad_per_s_to_thz(thz_to_rad_per_s(2.5)) / 2.5 - 1.0) < 1e-12);
}

TEST_CASE("unit round trips are exact inverses") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> logu(-6.0, 6.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::pow(10.0, logu(rng));
    CHECK(std::abs(rad_per_s_to_thz(thz_to_rad_per_s(v)) / v - 1.0) < 1e-12);
    CHECK(std::abs(s_to_fs(fs_to_s(v)) / v - 1.0) < 1e-12);
    CHECK(std::abs(m_to_um(um_to_m(v)) / v - 1.0) < 1e-12);
    CHECK(std::abs(m_to_mm(mm_to_m(v)) / v - 1.0) < 1e-12);
  }
}

TEST_CASE("default configuration validates") {
  const auto cfg = ExperimentConfig::paper_defaults();
  CHECK(cfg.deltaRPerp == 50e-6);
  CHECK(cfg.waist == 10e-6);
  CHECK(cfg.pulseFwhm == 195e-15);
  CHECK(cfg.crystalLength == 1e-3);
  CHECK(cfg.temperature == 4.0);
  CHECK(cfg.freqGrid.size() == 50);
  CHECK(cfg.delayGrid.size() == 201);
  const auto report = validate_config(cfg);
  CHECK(report.ok());
  CHECK(report.issues.empty());
}

TEST_CASE("validation reports named fields") {
  auto cfg = ExperimentConfig::paper_defaults();
  SUBCASE("zero waist") {
    cfg.waist = 0.0;
    const auto r = validate_config(cfg);
    REQUIRE_FALSE(r.ok());
    REQUIRE(r.issues.size() == 1);
    CHECK(r.issues[0].kind == ConfigErrorKind::NegativeLength);
    CHECK(r.issues[0].field == "waist");
  }
  SUBCASE("decreasing frequency grid") {
    cfg.freqGrid = {thz_to_rad_per_s(2.0), thz_to_rad_per_s(1.0)};
    const auto r = validate_config(cfg);
    REQUIRE_FALSE(r.ok());
    CHECK(r.issues[0].kind == ConfigErrorKind::NonMonotonicGrid);
  }
  SUBCASE("every violation is listed") {
    cfg.waist = -1.0;
    cfg.pulseFwhm = 0.0;
    cfg.temperature = -1.0;
    cfg.freqGrid.clear();
    const auto r = validate_config(cfg);
    CHECK_FALSE(r.ok());
    CHECK(r.issues.size() == 4);
  }
}

TEST_CASE("validation is total over random inputs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double specials[] = {0.0, -0.0, NAN, INFINITY, -INFINITY, 1e-300, -1e300};
  for (int i = 0; i < 2000; ++i) {
    ExperimentConfig cfg = ExperimentConfig::paper_defaults();
    auto pick = [&](double scale) {
      return rng() % 4 == 0 ? specials[rng() % 7] : scale * u(rng);
    };
    cfg.deltaRPerp = pick(1e-4);
    cfg.waist = pick(1e-5);
    cfg.pulseFwhm = pick(1e-13);
    cfg.crystalLength = pick(1e-3);
    cfg.temperature = pick(10.0);
    cfg.probeGroupIndex = pick(4.0);
    cfg.freqGrid.resize(rng() % 4);
    for (auto& f : cfg.freqGrid) f = pick(1e13);
    cfg.quadrature.quadRelTol = pick(0.1);
    const auto r = validate_config(cfg);
    CHECK(r.ok() == r.issues.empty());
  }
}

TEST_CASE("config text round trip") {
  auto cfg = ExperimentConfig::paper_defaults();
  cfg.deltaRPerp = 42e-6;
  cfg.quadrature.rngSeed = 99;
  cfg.quadrature.strategy = Strategy::TensorQuadrature;
  const auto back = parse_config_text(format_config_text(cfg));
  CHECK(back.deltaRPerp == doctest::Approx(42e-6).epsilon(1e-14));
  CHECK(back.quadrature.rngSeed == 99);
  CHECK(back.quadrature.strategy == Strategy::TensorQuadrature);
  REQUIRE(back.freqGrid.size() == cfg.freqGrid.size());
  for (std::size_t i = 0; i < cfg.freqGrid.size(); ++i)
    CHECK(back.freqGrid[i] == doctest::Approx(cfg.freqGrid[i]).epsilon(1e-12));
}

TEST_CASE("config parser rejects bad input") {
  CHECK_THROWS_AS(parse_config_text("bogus_key = 1\n"), Error);
  CHECK_THROWS_AS(parse_config_text("waist_um = ten\n"), Error);
  CHECK_THROWS_AS(parse_config_text("waist_um\n"), Error);
  CHECK_THROWS_AS(parse_config_text("strategy = simpson\n"), Error);
  const auto cfg = parse_config_text("# comment\n\nwaist_um = 12 # inline\n");
  CHECK(cfg.waist == doctest::Approx(12e-6));
}

TEST_CASE("linspace") {
  const auto v = linspace(1.0, 2.0, 5);
  REQUIRE(v.size() == 5);
  CHECK(v.front() == 1.0);
  CHECK(v.back() == 2.0);
  CHECK(v[2] == doctest::Approx(1.5));
  CHECK(linspace(3.0, 4.0, 1) == std::vector<double>{3.0});
  CHECK(linspace(3.0, 4.0, 0).empty());
}
