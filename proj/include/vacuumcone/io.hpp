#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vacuumcone/engine.hpp"
#include "vacuumcone/signal.hpp"

namespace vacuumcone {

/// Header names plus numeric rows of a comma-separated file.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of a named column, or -1.
  int column(const std::string& name) const;
};

/// Throws ParseError naming the 1-based row and column of the first bad cell.
CsvTable read_csv(const std::filesystem::path& path);

/// `delta_t_fs,G_V2_per_m2[,sigma]`
TimeTrace read_trace_csv(const std::filesystem::path& path);
void write_trace_csv(const std::filesystem::path& path, const TimeTrace& trace);

/// `freq_THz,G,err`; also accepts the sweep's wide spectrum file (total
/// columns), skipping rows whose total is empty.
Spectrum read_spectrum_csv(const std::filesystem::path& path);
void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum);

/// Converts a one-sided engine value (V^2/m^2 per rad/s) to the two-sided
/// spectral density in V^2/m^2 per THz that every output file uses.
double engine_to_spectral_density(double value);

/// Wide sweep output: freq_THz, total, causal, noncausal and momentum with
/// their error columns. Absent regions are written as empty cells.
void write_sweep_spectrum_csv(const std::filesystem::path& path, const CorrelationResult& result);
/// Total column of a sweep in the plain Spectrum format.
Spectrum total_spectrum(const CorrelationResult& result);
TimeTrace time_trace(const CorrelationResult& result);

nlohmann::json to_json(const ExperimentConfig& cfg);
nlohmann::json to_json(const CorrelationResult& result);
nlohmann::json to_json(const ComparisonReport& report);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace vacuumcone
