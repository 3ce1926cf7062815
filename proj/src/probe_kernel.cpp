#include "vacuumcone/probe_kernel.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vacuumcone/errors.hpp"

namespace vacuumcone {

namespace {

constexpr double kFwhmToSigma = 0.42466090014400953;  // 1 / sqrt(8 ln 2)

double normal_pdf(double x, double sigma) {
  const double z = x / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double u) {
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

void require_compatible(const PairKernel& pair) {
  if (pair.first.groupIndex != pair.second.groupIndex ||
      pair.first.crystalLength != pair.second.crystalLength) {
    throw Error(ErrorKind::InvalidArgument,
                "probes of a pair must share group index and crystal length");
  }
}

}  // namespace

double ProbeKernel::temporal_sigma() const { return pulseFwhm * kFwhmToSigma; }

double envelope(const ProbeKernel& probe, const Vec3& r, double t) {
  if (r.y < 0.0 || r.y > probe.crystalLength) return 0.0;
  const double dx = r.x - probe.transverseOffset;
  const double w2 = probe.waist * probe.waist;
  const double transverse =
      2.0 / (std::numbers::pi * w2) * std::exp(-2.0 * (dx * dx + r.z * r.z) / w2);
  const double comoving = t - probe.delay - r.y * probe.groupIndex / kConstants.c;
  return transverse * normal_pdf(comoving, probe.temporal_sigma()) / probe.crystalLength;
}

PairKernel PairKernel::from_config(const ExperimentConfig& cfg, double delay) {
  ProbeKernel base{cfg.waist, cfg.pulseFwhm, cfg.probeGroupIndex, cfg.crystalLength, 0.0, 0.0};
  ProbeKernel second = base;
  second.transverseOffset = cfg.deltaRPerp;
  second.delay = delay;
  return {base, second};
}

double PairKernel::lag_transverse_sigma() const {
  return std::hypot(first.transverse_sigma(), second.transverse_sigma());
}

double PairKernel::lag_temporal_sigma() const {
  return std::hypot(first.temporal_sigma(), second.temporal_sigma());
}

double pair_kernel(const PairKernel& pair, const Vec3& dr, double dt) {
  require_compatible(pair);
  const double length = pair.crystal_length();
  const double overlap = length - std::abs(dr.y);
  if (overlap <= 0.0) return 0.0;
  const double sx = pair.lag_transverse_sigma();
  const double centre_t = pair.delay() + dr.y * pair.group_index() / kConstants.c;
  return normal_pdf(dr.x - pair.delta_r_perp(), sx) * normal_pdf(dr.z, sx) *
         overlap / (length * length) * normal_pdf(dt - centre_t, pair.lag_temporal_sigma());
}

double longitudinal_lag_quantile(double length, double u) {
  if (u < 0.5) return length * (std::sqrt(2.0 * u) - 1.0);
  return length * (1.0 - std::sqrt(2.0 * (1.0 - u)));
}

LagDraw draw_lag(const PairKernel& pair, double uy, double ux, double uz) {
  const double sx = pair.lag_transverse_sigma();
  LagDraw d;
  d.dr.y = longitudinal_lag_quantile(pair.crystal_length(), uy);
  d.dr.x = pair.delta_r_perp() + sx * normal_quantile(ux);
  d.dr.z = sx * normal_quantile(uz);
  d.dtMean = pair.delay() + d.dr.y * pair.group_index() / kConstants.c;
  return d;
}

SupportBox kernel_support(const PairKernel& pair, double containment) {
  if (!(containment > 0.0 && containment < 1.0)) {
    throw Error(ErrorKind::InvalidContainment,
                "containment must lie in the open interval (0, 1), got " +
                    std::to_string(containment));
  }
  require_compatible(pair);
  // Equal share per coordinate; the longitudinal lag is kept whole, so the
  // resulting mass is at least containment^(3/4).
  const double per_axis = std::pow(containment, 0.25);
  const double z = normal_quantile(0.5 + 0.5 * per_axis);
  const double sx = pair.lag_transverse_sigma();
  const double st = pair.lag_temporal_sigma();
  const double length = pair.crystal_length();
  const double sweep = length * pair.group_index() / kConstants.c;

  SupportBox box;
  box.x = {pair.delta_r_perp() - z * sx, pair.delta_r_perp() + z * sx};
  box.y = {-length, length};
  box.z = {-z * sx, z * sx};
  box.t = {pair.delay() - sweep - z * st, pair.delay() + sweep + z * st};
  return box;
}

double kernel_mass(const PairKernel& pair, const SupportBox& box) {
  require_compatible(pair);
  const double sx = pair.lag_transverse_sigma();
  const double st = pair.lag_temporal_sigma();
  const double length = pair.crystal_length();
  const double mx = normal_cdf((box.x[1] - pair.delta_r_perp()) / sx) -
                    normal_cdf((box.x[0] - pair.delta_r_perp()) / sx);
  const double mz = normal_cdf(box.z[1] / sx) - normal_cdf(box.z[0] / sx);

  auto longitudinal = [&](double dy) {
    const double mu = pair.delay() + dy * pair.group_index() / kConstants.c;
    const double mt = normal_cdf((box.t[1] - mu) / st) - normal_cdf((box.t[0] - mu) / st);
    return (length - std::abs(dy)) / (length * length) * mt;
  };
  // The triangle has a kink at dy = 0; integrate each side separately.
  const double lo = std::max(box.y[0], -length);
  const double hi = std::min(box.y[1], length);
  double my = 0.0;
  constexpr int kPanels = 64;
  auto integrate = [&](double a, double b) {
    if (b <= a) return 0.0;
    double sum = 0.0;
    const double h = (b - a) / kPanels;
    for (int p = 0; p < kPanels; ++p) {
      sum += boost::math::quadrature::gauss<double, 20>::integrate(longitudinal, a + p * h,
                                                                   a + (p + 1) * h);
    }
    return sum;
  };
  my = integrate(lo, std::min(hi, 0.0)) + integrate(std::max(lo, 0.0), hi);
  return mx * mz * my;
}

}  // namespace vacuumcone
