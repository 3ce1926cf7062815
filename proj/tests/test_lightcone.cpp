#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "vacuumcone/config.hpp"
#include "vacuumcone/dispersion.hpp"
#include "vacuumcone/lightcone.hpp"
#include "vacuumcone/probe_kernel.hpp"
#include "vacuumcone/units.hpp"

using namespace vacuumcone;

namespace {

ConeClassifier constant_cone(double n) {
  return ConeClassifier(DispersionModel::constant(n, thz_to_rad_per_s(0.01), thz_to_rad_per_s(10.0)));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("classification examples") {
  const auto cls = ConeClassifier(load_dispersion(default_dispersion_table()));
  const double w = thz_to_rad_per_s(1.0);
  CHECK(cls.classify({1e-6, 0, 0}, 0.0, w) == Cone::NonCausal);
  CHECK(cls.classify({0, 0, 0}, 1e-15, w) == Cone::Causal);
  CHECK(cls.classify({0, 0, 0}, 0.0, w) == Cone::Causal);

  const auto three = constant_cone(3.0);
  CHECK(three.cone_radius(1e-12, w) == doctest::Approx(99.93e-6).epsilon(1e-4));
  CHECK(three.classify({99.93e-6, 0, 0}, 1e-12, w) == Cone::Causal);
  CHECK(three.classify({100.00e-6, 0, 0}, 1e-12, w) == Cone::NonCausal);
  CHECK(three.flight_time({100e-6, 0, 0}, w) == doctest::Approx(3.0 * 100e-6 / kConstants.c));
}

TEST_CASE("indicator weights partition unity; the boundary is causal") {
  const auto cls = ConeClassifier(load_dispersion(default_dispersion_table()));
  std::mt19937_64 rng(21);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::uniform_real_distribution<double> fu(0.1, 5.0);
  for (int i = 0; i < 2000; ++i) {
    const Vec3 d{1e-4 * nd(rng), 1e-4 * nd(rng), 1e-4 * nd(rng)};
    const double dt = 1e-12 * nd(rng);
    const double w = thz_to_rad_per_s(fu(rng));
    const double c = cls.indicator_weight(Region::Causal, d, dt, w);
    const double nc = cls.indicator_weight(Region::NonCausal, d, dt, w);
    CHECK(c + nc == 1.0);
    CHECK((c == 0.0 || c == 1.0));
    CHECK(cls.indicator_weight(Region::Total, d, dt, w) == 1.0);
    // Only |dr| and |dt| matter.
    const Vec3 rotated{d.z, -d.x, d.y};
    CHECK(cls.classify(rotated, -dt, w) == cls.classify(d, dt, w));
  }
  const auto three = constant_cone(3.0);
  const double w = thz_to_rad_per_s(1.0);
  for (double dt : {1e-15, 3.3e-13, 1e-12, 7.7e-12}) {
    const double r = three.cone_radius(dt, w);
    CHECK(three.indicator_weight(Region::Causal, {r, 0, 0}, dt, w) == 1.0);
    CHECK(three.indicator_weight(Region::NonCausal, {r, 0, 0}, dt, w) == 0.0);
  }
}

TEST_CASE("a larger index never makes a point causal") {
  std::mt19937_64 rng(22);
  std::normal_distribution<double> nd(0.0, 1.0);
  const double w = thz_to_rad_per_s(1.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 d{1e-4 * nd(rng), 1e-4 * nd(rng), 0.0};
    const double dt = 1e-12 * nd(rng);
    const double n1 = 1.0 + 4.0 * std::abs(nd(rng));
    const double n2 = n1 * (1.0 + std::abs(nd(rng)));
    if (constant_cone(n1).classify(d, dt, w) == Cone::NonCausal)
      CHECK(constant_cone(n2).classify(d, dt, w) == Cone::NonCausal);
  }
}

TEST_CASE("dispersion changes the classification between frequencies") {
  const auto model = load_dispersion(default_dispersion_table());
  const auto cls = ConeClassifier(model);
  const double lo = thz_to_rad_per_s(0.5), hi = thz_to_rad_per_s(4.5);
  REQUIRE(model.refractive_index(hi) > model.refractive_index(lo));
  const double dt = 1e-12;
  const Vec3 d{0.5 * (cls.cone_radius(dt, lo) + cls.cone_radius(dt, hi)), 0, 0};
  CHECK(cls.classify(d, dt, lo) == Cone::Causal);
  CHECK(cls.classify(d, dt, hi) == Cone::NonCausal);
}

TEST_CASE("non-causal mass of the pair kernel: Monte Carlo vs stratified quadrature") {
  const auto cfg = ExperimentConfig::paper_defaults();
  const PairKernel pair = PairKernel::from_config(cfg);
  const auto cls = ConeClassifier(load_dispersion(default_dispersion_table()));
  const double w = thz_to_rad_per_s(1.0);
  const double n = cls.dispersion().refractive_index(w);
  const double sx = pair.lag_transverse_sigma(), st = pair.lag_temporal_sigma();
  const double L = pair.crystal_length(), v = pair.group_index() / kConstants.c;

  // Plain Monte Carlo: the longitudinal lag is a difference of two uniform
  // positions, the others are normal.
  std::mt19937_64 rng(31);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  const int N = 1000000;
  int hits = 0;
  for (int i = 0; i < N; ++i) {
    const Vec3 d{pair.delta_r_perp() + sx * nd(rng), L * (ud(rng) - ud(rng)), sx * nd(rng)};
    const double dt = d.y * v + st * nd(rng);
    if (cls.classify(d, dt, w) == Cone::NonCausal) ++hits;
  }
  const double p_mc = static_cast<double>(hits) / N;
  const double sigma = std::sqrt(p_mc * (1.0 - p_mc) / N);

  // Quadrature over (dx, dy, dz) in strata; the time lag is integrated exactly.
  const oracle::GaussLegendre g(24);
  double p_q = 0.0;
  for (int sy = 0; sy < 64; ++sy) {
    const double y0 = -L + 2.0 * L * sy / 64, y1 = -L + 2.0 * L * (sy + 1) / 64;
    for (std::size_t iy = 0; iy < g.x.size(); ++iy) {
      const double dy = 0.5 * (y0 + y1) + 0.5 * (y1 - y0) * g.x[iy];
      const double wy = g.w[iy] * 0.5 * (y1 - y0) * (L - std::abs(dy)) / (L * L);
      for (std::size_t ix = 0; ix < g.x.size(); ++ix)
        for (std::size_t iz = 0; iz < g.x.size(); ++iz) {
          const double ux = 7.0 * g.x[ix], uz = 7.0 * g.x[iz];
          const double dx = pair.delta_r_perp() + sx * ux, dz = sx * uz;
          const double wxz = g.w[ix] * g.w[iz] * 49.0 * oracle::gaussian(ux, 0, 1) * oracle::gaussian(uz, 0, 1);
          const double a = n * std::sqrt(dx * dx + dy * dy + dz * dz) / kConstants.c;
          const double mu = dy * v;
          p_q += wy * wxz * (normal_cdf((a - mu) / st) - normal_cdf((-a - mu) / st));
        }
    }
  }
  CAPTURE(p_mc);
  CAPTURE(p_q);
  CHECK(std::abs(p_mc - p_q) < 2.0 * sigma);
}
