// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <thread>
#include <vector>

#include "vacuumcone/config.hpp"
#include "vacuumcone/engine.hpp"
#include "vacuumcone/io.hpp"
#include "vacuumcone/signal.hpp"
#include "vacuumcone/units.hpp"
#include "vacuumcone/vacuum_field.hpp"

using namespace vacuumcone;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& what) {
  std::printf("CRITERION %d %s: %s\n", id, pass ? "PASS" : "FAIL", what.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[1024];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool identical(const CorrelationResult& a, const CorrelationResult& b) {
  if (a.perFrequency.size() != b.perFrequency.size()) return false;
  auto eq = [](const std::optional<EngineResult>& x, const std::optional<EngineResult>& y) {
    if (x.has_value() != y.has_value()) return false;
    return !x || (same_bits(x->value, y->value) && same_bits(x->statError, y->statError));
  };
  for (std::size_t i = 0; i < a.perFrequency.size(); ++i) {
    const auto& p = a.perFrequency[i];
    const auto& q = b.perFrequency[i];
    if (!eq(p.total, q.total) || !eq(p.causal, q.causal) || !eq(p.noncausal, q.noncausal) ||
        !eq(p.momentum, q.momentum))
      return false;
  }
  if (a.timeDomain.size() != b.timeDomain.size()) return false;
  for (std::size_t i = 0; i < a.timeDomain.size(); ++i)
    if (!same_bits(a.timeDomain[i], b.timeDomain[i])) return false;
  return true;
}

double thz(double w) { return rad_per_s_to_thz(w); }

}  // namespace

int main() {
  const ExperimentConfig cfg = ExperimentConfig::paper_defaults();
  const ValidatedConfig vcfg = *validate_config(cfg).config;
  const DispersionModel model = load_dispersion(default_dispersion_table());
  const PairKernel pair = PairKernel::from_config(cfg);
  const VacuumCorrelator corr(model, cfg.temperature);
  const ConeClassifier cls(model);

  // 1. Partition consistency and runtime of the default sweep.
  const auto t0 = std::chrono::steady_clock::now();
  const CorrelationResult sweep = run_sweep(vcfg, model, RegionSet::all(), SweepOptions{});
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  {
    bool ok = seconds <= 600.0;
    double worst = 0.0;
    for (const auto& p : sweep.perFrequency) {
      if (!p.total || !p.causal || !p.noncausal) {
        ok = false;
        continue;
      }
      const double err = std::sqrt(p.total->statError * p.total->statError +
                                   p.causal->statError * p.causal->statError +
                                   p.noncausal->statError * p.noncausal->statError);
      const double gap = std::abs(p.causal->value + p.noncausal->value - p.total->value);
      if (gap > 2.0 * err) ok = false;
      if (err > 0.0) worst = std::max(worst, gap / err);
    }
    report(1, ok, fmt("max |causal+noncausal-total| / sqrt(sum err^2) = %.3g (limit 2) over %zu "
                      "frequencies; sweep runtime %.1f s at mcSamples = %zu (limit 600 s)",
                      worst, sweep.perFrequency.size(), seconds, cfg.quadrature.mcSamples));
  }

  // 2. Real space vs momentum space where |spectrum| > 5% of its peak.
  {
    std::vector<double> mom;
    double peak = 0.0;
    for (double w : cfg.freqGrid) {
      mom.push_back(g1_per_frequency_momentum(pair, corr, w).value);
      peak = std::max(peak, std::abs(mom.back()));
    }
    QuadratureSpec spec = cfg.quadrature;
    spec.mcSamples = 1000000;
    bool ok = true;
    double worst = 0.0, worst_f = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < cfg.freqGrid.size(); ++i) {
      if (std::abs(mom[i]) <= 0.05 * peak) continue;
      ++used;
      spec.rngSeed = derive_point_seed(cfg.quadrature.rngSeed, i);
      const auto rs = g1_per_frequency_realspace(pair, corr, cls, cfg.freqGrid[i], Region::Total, spec);
      const double rel = std::abs(rs.value / mom[i] - 1.0);
      if (rel > worst) worst = rel, worst_f = thz(cfg.freqGrid[i]);
      if (rel >= 0.02) ok = false;
    }
    report(2, ok, fmt("max relative difference %.3f%% at %.1f THz over %zu frequencies above 5%% "
                      "of peak (limit 2%%; mcSamples = %zu)",
                      100.0 * worst, worst_f, used, spec.mcSamples));
  }

  // 3. Non-causal fraction in 0.5-3 THz.
  {
    bool ok = true;
    double sum_ratio = 0.0, sum_nc = 0.0, sum_tot = 0.0;
    int count = 0;
    std::string bad;
    for (const auto& p : sweep.perFrequency) {
      const double f = thz(p.omega);
      if (f < 0.5 - 1e-9 || f > 3.0 + 1e-9) continue;
      const double ratio = p.noncausal->value / p.total->value;
      sum_ratio += ratio;
      sum_nc += p.noncausal->value;
      sum_tot += p.total->value;
      ++count;
      if (!(ratio > 0.5)) {
        ok = false;
        bad += fmt(" %.1f THz: %.3f;", f, ratio);
      }
    }
    report(3, ok, fmt("noncausal/total > 0.5 for every frequency in 0.5-3 THz; band-averaged "
                      "fraction %.3f (mean of ratios), %.3f (ratio of band sums) over %d points%s%s",
                      sum_ratio / count, sum_nc / sum_tot, count, bad.empty() ? "" : "; failing:",
                      bad.c_str()));
  }

  // 4. Spectral peak above 1 THz.
  {
    const Spectrum s = total_spectrum(sweep);
    std::size_t arg = 0;
    for (std::size_t i = 1; i < s.values.size(); ++i)
      if (s.values[i] > s.values[arg]) arg = i;
    report(4, s.freqs[arg] > 1.0,
           fmt("total spectrum peaks at %.2f THz (%.3g V^2/m^2 per THz); required > 1 THz",
               s.freqs[arg], s.values[arg]));
  }

  // 5. Amplitude of the low-passed trace.
  const TimeTrace raw = time_trace(sweep);
  {
    const TimeTrace lp = lowpass_3thz(raw);
    const auto zero = static_cast<std::size_t>(
        std::min_element(lp.delays.begin(), lp.delays.end(),
                         [](double a, double b) { return std::abs(a) < std::abs(b); }) -
        lp.delays.begin());
    const double g0 = lp.values[zero];
    const double p2p = peak_to_peak(lp.values);
    const bool ok = g0 >= 5.0 / 3.0 && g0 <= 15.0 && p2p >= 7.5 / 3.0 && p2p <= 22.5;
    report(5, ok, fmt("low-passed G(0) = %.3f V^2/m^2 (target 5, factor 3), peak-to-peak = %.3f "
                      "V^2/m^2 (target 7.5, factor 3)",
                      g0, p2p));
  }

  // 6. Envelope at |dt| = 1 ps.
  {
    std::vector<double> omegas, values;
    for (const auto& p : sweep.perFrequency) {
      omegas.push_back(p.omega);
      values.push_back(p.total->value);
    }
    const std::vector<double> probe{-1e-12, 0.0, 1e-12};
    const auto env = g1_time_domain_envelope(omegas, values, probe);
    const auto full = g1_time_domain_envelope(omegas, values, cfg.delayGrid);
    const double peak = *std::max_element(full.begin(), full.end());
    const double lo = std::min(env[0], env[2]) / peak;
    report(6, lo > 0.10,
           fmt("envelope at -1 ps / +1 ps = %.3f / %.3f of its peak %.3f V^2/m^2 (required > 0.10)",
               env[0] / peak, env[2] / peak, peak));
  }

  // 7. Microcausality of the band-limited commutator (n = 1).
  {
    const double dt = 1e-12;
    const double ct = kConstants.c * dt;
    auto peak_timelike = [&](double wc) {
      SignedLog best{-INFINITY, 0};
      for (int i = 0; i <= 4000; ++i) {
        const auto v = band_limited_commutator({ct * i / 4000.0, 0, 0}, dt, 1.0, wc);
        if (v.sign != 0 && v.logAbs > best.logAbs) best = v;
      }
      return best;
    };
    const double wc = kTwoPi * 20e12;
    const Vec3 spacelike{2.0 * ct, 0, 0};
    const double r1 = (band_limited_commutator(spacelike, dt, 1.0, wc).logAbs - peak_timelike(wc).logAbs) / std::log(10.0);
    const double r2 = (band_limited_commutator(spacelike, dt, 1.0, 2 * wc).logAbs - peak_timelike(2 * wc).logAbs) / std::log(10.0);
    report(7, r1 < -3.0 && r2 < r1,
           fmt("log10(|spacelike| / peak timelike) = %.1f at cutoff 2pi*20 THz, %.1f at 2pi*40 THz "
               "(required < -3 and decreasing)",
               r1, r2));
  }

  // 8. Green-tensor coincidence limit and series crossover.
  {
    double worst_lim = 0.0, worst_cross = 0.0;
    for (double f : {0.1, 1.0, 3.0, 5.0})
      for (double n : {1.0, 3.2}) {
        const double w = thz_to_rad_per_s(f);
        const double exact = n * w / (6.0 * std::numbers::pi * kConstants.c);
        worst_lim = std::max(worst_lim, std::abs(green_tensor_im_xx({0, 0, 0}, w, n) / exact - 1.0));
        const double k = n * w / kConstants.c;
        for (const Vec3& dir : {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0.6, 0.0, 0.8}, Vec3{0.48, 0.6, 0.64}}) {
          const double s = 1e-3 / k;
          const Vec3 d{dir.x * s, dir.y * s, dir.z * s};
          worst_cross = std::max(worst_cross, std::abs(green_tensor_im_xx_series(d, w, n) /
                                                           green_tensor_im_xx_closed(d, w, n) - 1.0));
        }
      }
    report(8, worst_lim <= 1e-9 && worst_cross <= 1e-6,
           fmt("coincidence limit rel. error %.2e (limit 1e-9); series vs closed form at u = 1e-3 "
               "rel. difference %.2e (limit 1e-6)",
               worst_lim, worst_cross));
  }

  // 9. Thermal factor in the spectra.
  {
    const VacuumCorrelator cold(model, 0.0);
    auto at = [&](const VacuumCorrelator& c, double f) {
      return g1_per_frequency_realspace(pair, c, cls, thz_to_rad_per_s(f), Region::Total, cfg.quadrature).value;
    };
    const double d1 = std::abs(at(corr, 1.0) / at(cold, 1.0) - 1.0);
    const double x = kConstants.hbar * thz_to_rad_per_s(0.1) / (2.0 * kConstants.kB * 4.0);
    const double ratio = at(corr, 0.1) / at(cold, 0.1);
    const double d2 = std::abs(ratio / (1.0 / std::tanh(x)) - 1.0);
    report(9, d1 < 1e-4 && d2 < 1e-6,
           fmt("1 THz: 4 K vs 0 K differ by %.3e%% (limit 0.01%%); 0.1 THz ratio %.9f vs "
               "coth(%.4f) = %.9f, rel. diff %.1e (limit 1e-6)",
               100.0 * d1, ratio, x, 1.0 / std::tanh(x), d2));
  }

  // 10. Determinism across thread counts.
  {
    SweepOptions par;
    par.threads = std::max(4u, std::thread::hardware_concurrency());
    const CorrelationResult again = run_sweep(vcfg, model, RegionSet::all(), par);
    report(10, identical(sweep, again),
           fmt("default sweep with 1 and %u threads bit-identical in all regions and the trace",
               par.threads));
  }

  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
