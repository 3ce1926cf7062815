#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vacuumcone {

enum class Strategy {
  StratifiedMonteCarlo,
  TensorQuadrature,
};

std::string_view to_string(Strategy s);

struct QuadratureSpec {
  std::size_t mcSamples = 100000;
  std::uint64_t rngSeed = 20220601;
  double quadRelTol = 0.01;
  std::size_t maxSubdivisions = 200;
  Strategy strategy = Strategy::StratifiedMonteCarlo;
  // Number of equal-mass strata along the longitudinal lag. Kept fixed when
  // mcSamples changes so the statistical error scales as 1/sqrt(N).
  std::size_t strata = 512;
  // Strata per transverse lag axis, combined with the longitudinal ones.
  std::size_t transverseStrata = 4;
};

/// All physical quantities in SI units; frequencies in rad/s.
struct ExperimentConfig {
  double deltaRPerp = 50e-6;
  double waist = 10e-6;        // 1/e^2 intensity radius
  double pulseFwhm = 195e-15;  // intensity FWHM
  double crystalLength = 1e-3;
  double temperature = 4.0;
  double probeGroupIndex = 3.24;
  std::vector<double> freqGrid;
  std::vector<double> delayGrid;
  QuadratureSpec quadrature;
  std::filesystem::path dispersionTable;  // empty: bundled ZnTe table

  /// Geometry of the two-beam vacuum measurement, 0.1-5 THz in 50 points,
  /// delays of +-2 ps in 201 points.
  static ExperimentConfig paper_defaults();
};

enum class ConfigErrorKind {
  NegativeLength,
  EmptyGrid,
  NonMonotonicGrid,
  InvalidValue,
};

std::string_view to_string(ConfigErrorKind kind);

struct ConfigIssue {
  ConfigErrorKind kind;
  std::string field;
  std::string message;
};

struct ValidationReport;

/// Checks every invariant and reports all violations, never only the first.
ValidationReport validate_config(const ExperimentConfig& cfg);

class ValidatedConfig {
 public:
  const ExperimentConfig& get() const { return cfg_; }
  const ExperimentConfig* operator->() const { return &cfg_; }

 private:
  explicit ValidatedConfig(ExperimentConfig cfg) : cfg_(std::move(cfg)) {}
  friend ValidationReport validate_config(const ExperimentConfig& cfg);

  ExperimentConfig cfg_;
};

struct ValidationReport {
  std::optional<ValidatedConfig> config;
  std::vector<ConfigIssue> issues;

  bool ok() const { return config.has_value(); }
};

/// Evenly spaced grid including both endpoints; a single point yields {lo}.
std::vector<double> linspace(double lo, double hi, std::size_t points);

/// Reads the flat `key = value` config format. Missing keys keep the
/// defaults; unknown keys and malformed numbers throw Error(ParseError).
/// Relative dispersion_table paths resolve against the config file's folder.
ExperimentConfig load_config_file(const std::filesystem::path& path);
ExperimentConfig parse_config_text(std::string_view text,
                                   const std::filesystem::path& base_dir = {});

/// Serializes to the same format that load_config_file reads.
std::string format_config_text(const ExperimentConfig& cfg);

/// Path of the bundled ZnTe THz index table (VACUUMCONE_DATA_DIR overrides).
std::filesystem::path default_dispersion_table();

}  // namespace vacuumcone
