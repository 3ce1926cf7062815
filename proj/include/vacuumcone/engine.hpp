#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vacuumcone/config.hpp"
#include "vacuumcone/lightcone.hpp"
#include "vacuumcone/probe_kernel.hpp"
#include "vacuumcone/vacuum_field.hpp"

namespace vacuumcone {

enum class EnginePath { RealSpace, Momentum };

std::string_view to_string(EnginePath path);

/// One per-frequency signal value, V^2/m^2 per rad/s. Its integral over
/// omega in (0, inf) weighted by cos(omega dt) is the time-domain signal.
struct EngineResult {
  double value = 0.0;
  double statError = 0.0;
  std::size_t neval = 0;
  EnginePath path = EnginePath::RealSpace;
  bool converged = true;
};

struct SplitResult {
  EngineResult total;
  EngineResult causal;
  EngineResult noncausal;

  const EngineResult& get(Region region) const;
};

/// Real-space route: average of C_omega over exact draws from the pair
/// kernel, split by the in-medium light cone. The time lag is integrated
/// analytically (total) or by Gauss-Legendre quadrature restricted to the
/// non-causal window |dt| < n|dr|/c, so every sample contributes to all
/// three regions and causal + noncausal equals total sample by sample.
SplitResult g1_split_realspace(const PairKernel& pair, const VacuumCorrelator& corr,
                               const ConeClassifier& cls, double omega,
                               const QuadratureSpec& spec);

EngineResult g1_per_frequency_realspace(const PairKernel& pair, const VacuumCorrelator& corr,
                                        const ConeClassifier& cls, double omega, Region region,
                                        const QuadratureSpec& spec);

/// Plane-wave route for the total signal: the sphere |q| = n omega / c is
/// integrated in polar angle by adaptive Gauss-Kronrod, the azimuth in
/// closed form through J0 and J2.
EngineResult g1_per_frequency_momentum(const PairKernel& pair, const VacuumCorrelator& corr,
                                       double omega, const QuadratureSpec& spec = {});

/// sinc(x) = sin(x)/x with sinc(0) = 1.
double sinc(double x);

/// Seed for grid point `index` of a sweep; independent of scheduling.
std::uint64_t derive_point_seed(std::uint64_t base, std::size_t index);

/// G(dt) = int domega g(omega) cos(omega dt) by the trapezoidal rule over
/// the frequency grid. Throws GridTooCoarse if the grid spacing exceeds
/// 1 / (2 span(delays)) in Hz or either grid has fewer than 2 points.
std::vector<double> g1_time_domain(std::span<const double> omegas,
                                   std::span<const double> values,
                                   std::span<const double> delays);

/// |int domega g(omega) exp(i omega dt)|, the envelope of g1_time_domain.
std::vector<double> g1_time_domain_envelope(std::span<const double> omegas,
                                            std::span<const double> values,
                                            std::span<const double> delays);

/// Minimum frequency-grid density check shared by the CLI.
void check_time_domain_grids(std::span<const double> omegas, std::span<const double> delays);

struct RegionSet {
  bool total = true;
  bool causal = true;
  bool noncausal = true;

  bool contains(Region r) const;
  static RegionSet all() { return {}; }
  static RegionSet total_only() { return {true, false, false}; }
};

struct SweepOptions {
  unsigned threads = 1;
  bool timeDomain = true;
  bool momentum = true;
};

struct FrequencyPoint {
  double omega = 0.0;
  std::optional<EngineResult> total;
  std::optional<EngineResult> causal;
  std::optional<EngineResult> noncausal;
  std::optional<EngineResult> momentum;
  bool flagged = false;
  std::string failure;
};

struct Provenance {
  std::string enginePath = "realspace";
  std::string strategy;
  std::string timestamp;
  std::string version;
  std::string waistConvention = "1/e^2 intensity radius";
  std::string pulseConvention = "intensity FWHM";
  std::string spectrumConvention =
      "G(Omega) = (2 pi)^-1 int d(dt) exp(i Omega dt) G(dt); one-sided engine value is 2 G(Omega)";
  std::string dispersionTable;
  unsigned threads = 1;
  std::vector<std::size_t> flaggedPoints;
};

struct CorrelationResult {
  std::vector<FrequencyPoint> perFrequency;
  std::vector<double> delays;
  std::vector<double> timeDomain;
  ExperimentConfig config;
  Provenance provenance;

  bool has_nonconvergence() const { return !provenance.flaggedPoints.empty(); }
};

/// Runs every frequency of the grid on a worker pool. Each point owns its
/// output slot and a seed derived from (rngSeed, index), so results do not
/// depend on the thread count. Engine errors flag the point and the sweep
/// continues. A point is also flagged when its statistical error exceeds
/// quadRelTol times the spectral peak of |total|.
CorrelationResult run_sweep(const ValidatedConfig& cfg, RegionSet regions,
                            const SweepOptions& options = {});

/// Same, with an already loaded dispersion model.
CorrelationResult run_sweep(const ValidatedConfig& cfg, const DispersionModel& dispersion,
                            RegionSet regions, const SweepOptions& options = {});

}  // namespace vacuumcone
