#include "vacuumcone/engine.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "vacuumcone/errors.hpp"
#include "vacuumcone/version.hpp"

namespace vacuumcone {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTail = 10.0;  // Gaussian half-width, in sd, treated as the full line

using Legendre12 = boost::math::quadrature::gauss<double, 12>;
using Legendre8 = boost::math::quadrature::gauss<double, 8>;

// Fixed per-frequency quantities of the real-space integrand.
struct LagIntegrand {
  double omega;
  double n_green;
  double n_cone;
  double sigma_t;
  double damping;  // exp(-omega^2 sigma_t^2 / 2), the Gaussian time average of cos

  struct Value {
    double total;
    double noncausal;
  };

  // int dt N(dt; mu, sigma_t) cos(omega dt) Im G(dr), in full and restricted
  // to |dt| < n |dr| / c.
  Value operator()(const Vec3& dr, double mu) const {
    const double green = green_tensor_im_xx(dr, omega, n_green);
    const double full = std::cos(omega * mu) * damping;
    const double window = n_cone * dr.norm() / kConstants.c;
    const double lo = std::max(-window, mu - kTail * sigma_t);
    const double hi = std::min(window, mu + kTail * sigma_t);
    double restricted = 0.0;
    if (lo < hi) {
      if (lo == mu - kTail * sigma_t && hi == mu + kTail * sigma_t) {
        restricted = full;
      } else {
        restricted = gaussian_cos_segment(mu, lo, hi);
      }
    }
    return {green * full, green * restricted};
  }

  double gaussian_cos_segment(double mu, double lo, double hi) const {
    // Standardized variable x = (t - mu)/sigma_t; panels no wider than two
    // sd or half an oscillation period.
    const double xa = (lo - mu) / sigma_t;
    const double xb = (hi - mu) / sigma_t;
    const double wmax = std::min(2.0, kPi / (omega * sigma_t));
    const int panels = std::max(1, static_cast<int>(std::ceil((xb - xa) / wmax)));
    const double h = (xb - xa) / panels;
    const double norm = 1.0 / std::sqrt(2.0 * kPi);
    auto f = [&](double x) {
      return std::cos(omega * (mu + sigma_t * x)) * norm * std::exp(-0.5 * x * x);
    };
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) sum += Legendre12::integrate(f, xa + p * h, xa + (p + 1) * h);
    return sum;
  }
};

LagIntegrand make_integrand(const PairKernel& pair, const VacuumCorrelator& corr,
                            const ConeClassifier& cls, double omega) {
  const double st = pair.lag_temporal_sigma();
  return {omega, corr.dispersion().refractive_index(omega),
          cls.dispersion().refractive_index(omega), st,
          std::exp(-0.5 * omega * omega * st * st)};
}

// Uniform double in the open interval (0, 1).
double open_uniform(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

struct Accumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  void add(double v) {
    sum += v;
    sum_sq += v * v;
  }
};

SplitResult split_monte_carlo(const PairKernel& pair, const LagIntegrand& integrand,
                              double prefactor, const QuadratureSpec& spec) {
  // Cells of an (strata x t x t) grid over the (uy, ux, uz) unit cube, each
  // holding >= 2 samples so that its variance can be estimated. The
  // remainder of mcSamples goes one by one to the leading cells.
  const std::size_t t = std::max<std::size_t>(1, spec.transverseStrata);
  const std::size_t max_cells = std::max<std::size_t>(1, spec.mcSamples / 2);
  const std::size_t ystrata =
      std::max<std::size_t>(1, std::min(spec.strata, max_cells / (t * t)));
  const std::size_t cells = ystrata * t * t;
  const std::size_t per = std::max<std::size_t>(2, spec.mcSamples / cells);
  const std::size_t extra = per * cells < spec.mcSamples ? spec.mcSamples - per * cells : 0;
  std::mt19937_64 rng(spec.rngSeed);

  double mean_tot = 0.0, mean_nc = 0.0, mean_c = 0.0;
  double var_tot = 0.0, var_nc = 0.0, var_c = 0.0;
  const double inv_cells = 1.0 / static_cast<double>(cells);
  const double inv_y = 1.0 / static_cast<double>(ystrata);
  const double inv_t = 1.0 / static_cast<double>(t);

  for (std::size_t cell = 0; cell < cells; ++cell) {
    const std::size_t sy = cell / (t * t);
    const std::size_t sx = (cell / t) % t;
    const std::size_t sz = cell % t;
    const std::size_t count = per + (cell < extra ? 1 : 0);
    const double m = static_cast<double>(count);
    Accumulator tot, nc, c;
    for (std::size_t i = 0; i < count; ++i) {
      const double uy = (static_cast<double>(sy) + open_uniform(rng)) * inv_y;
      const double ux = (static_cast<double>(sx) + open_uniform(rng)) * inv_t;
      const double uz = (static_cast<double>(sz) + open_uniform(rng)) * inv_t;
      const LagDraw d = draw_lag(pair, uy, ux, uz);
      const auto v = integrand(d.dr, d.dtMean);
      tot.add(v.total);
      nc.add(v.noncausal);
      c.add(v.total - v.noncausal);
    }
    auto fold = [&](const Accumulator& a, double& mean, double& var) {
      const double mu = a.sum / m;
      const double sample_var = std::max(0.0, (a.sum_sq - m * mu * mu) / (m - 1.0));
      mean += mu * inv_cells;
      var += sample_var / m * inv_cells * inv_cells;
    };
    fold(tot, mean_tot, var_tot);
    fold(nc, mean_nc, var_nc);
    fold(c, mean_c, var_c);
  }

  const std::size_t neval = cells * per + extra;
  auto make = [&](double mean, double var) {
    EngineResult r;
    r.value = prefactor * mean;
    r.statError = std::abs(prefactor) * std::sqrt(var);
    r.neval = neval;
    r.path = EnginePath::RealSpace;
    r.converged = r.statError <= spec.quadRelTol * std::abs(r.value);
    return r;
  };
  return {make(mean_tot, var_tot), make(mean_c, var_c), make(mean_nc, var_nc)};
}

// Product Gauss-Legendre rule over (dy, xi_x, xi_z); transverse lags in
// units of their sd on [-8, 8], the triangular dy weight split at its kink.
struct TensorSums {
  double total = 0.0;
  double noncausal = 0.0;
  std::size_t neval = 0;
};

TensorSums tensor_rule(const PairKernel& pair, const LagIntegrand& integrand, int y_panels) {
  constexpr int kTransversePanels = 4;
  constexpr double kSpan = 8.0;
  std::vector<double> xi, wxi;
  const double h = 2.0 * kSpan / kTransversePanels;
  const auto& nodes = Legendre8::abscissa();
  const auto& weights = Legendre8::weights();
  auto push_rule = [&](std::vector<double>& xs, std::vector<double>& ws, double a, double b) {
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      for (int sgn : {-1, 1}) {
        if (nodes[j] == 0.0 && sgn < 0) continue;
        xs.push_back(mid + sgn * half * nodes[j]);
        ws.push_back(half * weights[j]);
      }
    }
  };
  for (int p = 0; p < kTransversePanels; ++p) push_rule(xi, wxi, -kSpan + p * h, -kSpan + (p + 1) * h);

  const double length = pair.crystal_length();
  std::vector<double> ys, wys;
  const double hy = length / y_panels;
  for (int p = 0; p < y_panels; ++p) {
    push_rule(ys, wys, -length + p * hy, -length + (p + 1) * hy);
    push_rule(ys, wys, p * hy, (p + 1) * hy);
  }

  const double sx = pair.lag_transverse_sigma();
  const double norm = 1.0 / std::sqrt(2.0 * kPi);
  TensorSums out;
  for (std::size_t iy = 0; iy < ys.size(); ++iy) {
    const double dy = ys[iy];
    const double wy = wys[iy] * (length - std::abs(dy)) / (length * length);
    const double mu = pair.delay() + dy * pair.group_index() / kConstants.c;
    for (std::size_t ix = 0; ix < xi.size(); ++ix) {
      const double wx = wxi[ix] * norm * std::exp(-0.5 * xi[ix] * xi[ix]);
      for (std::size_t iz = 0; iz < xi.size(); ++iz) {
        const double wz = wxi[iz] * norm * std::exp(-0.5 * xi[iz] * xi[iz]);
        const Vec3 dr{pair.delta_r_perp() + sx * xi[ix], dy, sx * xi[iz]};
        const auto v = integrand(dr, mu);
        const double w = wy * wx * wz;
        out.total += w * v.total;
        out.noncausal += w * v.noncausal;
        ++out.neval;
      }
    }
  }
  return out;
}

SplitResult split_tensor(const PairKernel& pair, const LagIntegrand& integrand, double prefactor,
                         const QuadratureSpec& spec) {
  // 32 x 32 transverse nodes per dy node, 16 dy nodes per panel pair.
  const std::size_t per_y_panel = 16 * 32 * 32;
  const int panels = std::max<int>(2, static_cast<int>(spec.mcSamples / per_y_panel));
  const TensorSums fine = tensor_rule(pair, integrand, panels);
  const TensorSums coarse = tensor_rule(pair, integrand, panels / 2);
  auto make = [&](double f, double c, std::size_t neval) {
    EngineResult r;
    r.value = prefactor * f;
    r.statError = std::abs(prefactor * (f - c));
    r.neval = neval;
    r.path = EnginePath::RealSpace;
    r.converged = r.statError <= spec.quadRelTol * std::abs(r.value);
    return r;
  };
  const std::size_t neval = fine.neval + coarse.neval;
  return {make(fine.total, coarse.total, neval),
          make(fine.total - fine.noncausal, coarse.total - coarse.noncausal, neval),
          make(fine.noncausal, coarse.noncausal, neval)};
}

}  // namespace

std::string_view to_string(EnginePath path) {
  return path == EnginePath::RealSpace ? "realspace" : "momentum";
}

const EngineResult& SplitResult::get(Region region) const {
  switch (region) {
    case Region::Total: return total;
    case Region::Causal: return causal;
    case Region::NonCausal: return noncausal;
  }
  return total;
}

SplitResult g1_split_realspace(const PairKernel& pair, const VacuumCorrelator& corr,
                               const ConeClassifier& cls, double omega,
                               const QuadratureSpec& spec) {
  const LagIntegrand integrand = make_integrand(pair, corr, cls, omega);
  const double prefactor = corr.spectral_prefactor(omega);
  if (spec.strategy == Strategy::TensorQuadrature) return split_tensor(pair, integrand, prefactor, spec);
  return split_monte_carlo(pair, integrand, prefactor, spec);
}

EngineResult g1_per_frequency_realspace(const PairKernel& pair, const VacuumCorrelator& corr,
                                        const ConeClassifier& cls, double omega, Region region,
                                        const QuadratureSpec& spec) {
  return g1_split_realspace(pair, corr, cls, omega, spec).get(region);
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

EngineResult g1_per_frequency_momentum(const PairKernel& pair, const VacuumCorrelator& corr,
                                       double omega, const QuadratureSpec& spec) {
  const double n = corr.dispersion().refractive_index(omega);
  const double k = n * omega / kConstants.c;
  const double k_probe = omega * pair.group_index() / kConstants.c;
  const double half_length = 0.5 * pair.crystal_length();
  const double sx = pair.lag_transverse_sigma();
  const double st = pair.lag_temporal_sigma();
  const double dr = pair.delta_r_perp();

  auto integrand = [&](double theta) {
    const double s = std::sin(theta);
    const double a = k * s * dr;
    const double j0 = std::cyl_bessel_j(0.0, a);
    const double j2 = std::cyl_bessel_j(2.0, a);
    // int dphi (1 - sin^2 theta cos^2 phi) cos(a cos phi)
    const double azimuth = 2.0 * kPi * j0 - s * s * kPi * (j0 - j2);
    const double pm = sinc((k * std::cos(theta) - k_probe) * half_length);
    return s * azimuth * std::exp(-0.5 * k * k * s * s * sx * sx) * pm * pm;
  };

  std::vector<double> breaks{0.0, 0.5 * kPi, kPi};
  if (k > k_probe) breaks.push_back(std::acos(k_probe / k));
  // Width of the phase-matching lobe in polar angle.
  const double lobe = std::sqrt(4.0 * kPi / (k * pair.crystal_length()));
  if (lobe < 0.5 * kPi) breaks.push_back(lobe);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  double sum = 0.0, err = 0.0;
  const unsigned depth = static_cast<unsigned>(
      std::clamp<std::size_t>(std::bit_width(spec.maxSubdivisions), 4, 30));
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double e = 0.0;
    sum += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, breaks[i], breaks[i + 1], depth, 1e-11, &e);
    err += e;
  }
  const double scale = corr.spectral_prefactor(omega) * k / (16.0 * kPi * kPi) *
                       std::exp(-0.5 * omega * omega * st * st) * std::cos(omega * pair.delay());
  EngineResult r;
  r.value = scale * sum;
  r.statError = std::abs(scale) * err;
  r.neval = 0;
  r.path = EnginePath::Momentum;
  r.converged = err <= 1e-6 * std::abs(sum) + 1e-300;
  return r;
}

std::uint64_t derive_point_seed(std::uint64_t base, std::size_t index) {
  // splitmix64 finalizer over the combined key
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void check_time_domain_grids(std::span<const double> omegas, std::span<const double> delays) {
  if (delays.size() < 2) {
    throw Error(ErrorKind::GridTooCoarse,
                "delay grid needs at least 2 points, got " + std::to_string(delays.size()));
  }
  if (omegas.size() < 2) {
    throw Error(ErrorKind::GridTooCoarse,
                "frequency grid needs at least 2 points, got " + std::to_string(omegas.size()));
  }
  const auto [dmin, dmax] = std::minmax_element(delays.begin(), delays.end());
  const double span = *dmax - *dmin;
  double widest = 0.0;
  for (std::size_t i = 1; i < omegas.size(); ++i) widest = std::max(widest, omegas[i] - omegas[i - 1]);
  const double required = 1.0 / (2.0 * span);  // Hz
  if (widest / (2.0 * kPi) > required * (1.0 + 1e-9)) {
    std::ostringstream msg;
    msg << "frequency spacing " << widest / (2.0 * kPi) * 1e-12
        << " THz exceeds the required " << required * 1e-12 << " THz for a delay span of "
        << span * 1e15 << " fs";
    throw Error(ErrorKind::GridTooCoarse, msg.str());
  }
}

std::vector<double> g1_time_domain(std::span<const double> omegas,
                                   std::span<const double> values,
                                   std::span<const double> delays) {
  if (omegas.size() != values.size())
    throw Error(ErrorKind::InvalidArgument, "frequency and value arrays differ in length");
  check_time_domain_grids(omegas, delays);
  std::vector<double> out(delays.size(), 0.0);
  for (std::size_t j = 0; j < delays.size(); ++j) {
    double acc = 0.0;
    for (std::size_t i = 1; i < omegas.size(); ++i) {
      const double a = values[i - 1] * std::cos(omegas[i - 1] * delays[j]);
      const double b = values[i] * std::cos(omegas[i] * delays[j]);
      acc += 0.5 * (omegas[i] - omegas[i - 1]) * (a + b);
    }
    out[j] = acc;
  }
  return out;
}

std::vector<double> g1_time_domain_envelope(std::span<const double> omegas,
                                            std::span<const double> values,
                                            std::span<const double> delays) {
  if (omegas.size() != values.size())
    throw Error(ErrorKind::InvalidArgument, "frequency and value arrays differ in length");
  check_time_domain_grids(omegas, delays);
  std::vector<double> out(delays.size(), 0.0);
  for (std::size_t j = 0; j < delays.size(); ++j) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 1; i < omegas.size(); ++i) {
      const double h = 0.5 * (omegas[i] - omegas[i - 1]);
      re += h * (values[i - 1] * std::cos(omegas[i - 1] * delays[j]) +
                 values[i] * std::cos(omegas[i] * delays[j]));
      im += h * (values[i - 1] * std::sin(omegas[i - 1] * delays[j]) +
                 values[i] * std::sin(omegas[i] * delays[j]));
    }
    out[j] = std::hypot(re, im);
  }
  return out;
}

bool RegionSet::contains(Region r) const {
  switch (r) {
    case Region::Total: return total;
    case Region::Causal: return causal;
    case Region::NonCausal: return noncausal;
  }
  return false;
}

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

}  // namespace

CorrelationResult run_sweep(const ValidatedConfig& vcfg, RegionSet regions,
                            const SweepOptions& options) {
  const auto& cfg = vcfg.get();
  const auto table = cfg.dispersionTable.empty() ? default_dispersion_table() : cfg.dispersionTable;
  CorrelationResult result = run_sweep(vcfg, load_dispersion(table), regions, options);
  result.provenance.dispersionTable = table.string();
  return result;
}

CorrelationResult run_sweep(const ValidatedConfig& vcfg, const DispersionModel& dispersion,
                            RegionSet regions, const SweepOptions& options) {
  const auto& cfg = vcfg.get();
  if (options.timeDomain) check_time_domain_grids(cfg.freqGrid, cfg.delayGrid);

  const PairKernel pair = PairKernel::from_config(cfg);
  const VacuumCorrelator corr(dispersion, cfg.temperature);
  const ConeClassifier cls(dispersion);

  CorrelationResult result;
  result.config = cfg;
  result.delays = cfg.delayGrid;
  result.perFrequency.resize(cfg.freqGrid.size());
  result.provenance.strategy = std::string(to_string(cfg.quadrature.strategy));
  result.provenance.timestamp = utc_timestamp();
  result.provenance.version = kVersionString;
  result.provenance.threads = std::max(1u, options.threads);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.freqGrid.size(); i = next++) {
      FrequencyPoint& slot = result.perFrequency[i];
      slot.omega = cfg.freqGrid[i];
      try {
        QuadratureSpec spec = cfg.quadrature;
        spec.rngSeed = derive_point_seed(cfg.quadrature.rngSeed, i);
        const SplitResult split = g1_split_realspace(pair, corr, cls, slot.omega, spec);
        slot.total = split.total;
        if (regions.causal) slot.causal = split.causal;
        if (regions.noncausal) slot.noncausal = split.noncausal;
        if (options.momentum) slot.momentum = g1_per_frequency_momentum(pair, corr, slot.omega, spec);
      } catch (const Error& e) {
        slot.flagged = true;
        slot.failure = e.what();
        slot.total.reset();
        slot.causal.reset();
        slot.noncausal.reset();
        slot.momentum.reset();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < result.provenance.threads; ++t) pool.emplace_back(worker);
    worker();
  }

  double peak = 0.0;
  for (const auto& p : result.perFrequency)
    if (p.total) peak = std::max(peak, std::abs(p.total->value));
  for (std::size_t i = 0; i < result.perFrequency.size(); ++i) {
    auto& p = result.perFrequency[i];
    const double limit = cfg.quadrature.quadRelTol * peak;
    for (const auto* r : {&p.total, &p.causal, &p.noncausal}) {
      if (*r && (*r)->statError > limit) p.flagged = true;
    }
    if (p.flagged) result.provenance.flaggedPoints.push_back(i);
  }

  if (options.timeDomain) {
    std::vector<double> omegas, values;
    for (const auto& p : result.perFrequency) {
      if (!p.total) continue;
      omegas.push_back(p.omega);
      values.push_back(p.total->value);
    }
    result.timeDomain = g1_time_domain(omegas, values, result.delays);
  }
  if (!regions.total) {
    for (auto& p : result.perFrequency) p.total.reset();
  }
  return result;
}

}  // namespace vacuumcone
