#include "vacuumcone/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "vacuumcone/errors.hpp"
#include "vacuumcone/units.hpp"

#ifndef VACUUMCONE_DATA_DIR
#define VACUUMCONE_DATA_DIR "data"
#endif

namespace vacuumcone {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::StratifiedMonteCarlo: return "stratified-mc";
    case Strategy::TensorQuadrature: return "tensor-quadrature";
  }
  return "unknown";
}

std::string_view to_string(ConfigErrorKind kind) {
  switch (kind) {
    case ConfigErrorKind::NegativeLength: return "NegativeLength";
    case ConfigErrorKind::EmptyGrid: return "EmptyGrid";
    case ConfigErrorKind::NonMonotonicGrid: return "NonMonotonicGrid";
    case ConfigErrorKind::InvalidValue: return "InvalidValue";
  }
  return "Unknown";
}

std::vector<double> linspace(double lo, double hi, std::size_t points) {
  std::vector<double> out;
  out.reserve(points);
  if (points == 1) {
    out.push_back(lo);
    return out;
  }
  for (std::size_t i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(points - 1);
    out.push_back(lo + (hi - lo) * f);
  }
  if (points > 1) out.back() = hi;
  return out;
}

ExperimentConfig ExperimentConfig::paper_defaults() {
  ExperimentConfig cfg;
  cfg.freqGrid = linspace(thz_to_rad_per_s(0.1), thz_to_rad_per_s(5.0), 50);
  cfg.delayGrid = linspace(fs_to_s(-2000.0), fs_to_s(2000.0), 201);
  return cfg;
}

ValidationReport validate_config(const ExperimentConfig& cfg) {
  ValidationReport report;
  auto issue = [&](ConfigErrorKind kind, std::string field, std::string msg) {
    report.issues.push_back({kind, std::move(field), std::move(msg)});
  };
  auto positive = [&](double v, const char* field) {
    if (!std::isfinite(v) || v <= 0.0)
      issue(ConfigErrorKind::NegativeLength, field, "must be finite and > 0");
  };

  if (!std::isfinite(cfg.deltaRPerp) || cfg.deltaRPerp < 0.0)
    issue(ConfigErrorKind::NegativeLength, "deltaRPerp", "must be finite and >= 0");
  positive(cfg.waist, "waist");
  positive(cfg.pulseFwhm, "pulseFwhm");
  positive(cfg.crystalLength, "crystalLength");
  if (!std::isfinite(cfg.temperature) || cfg.temperature < 0.0)
    issue(ConfigErrorKind::InvalidValue, "temperature", "must be finite and >= 0");
  if (!std::isfinite(cfg.probeGroupIndex) || cfg.probeGroupIndex < 1.0)
    issue(ConfigErrorKind::InvalidValue, "probeGroupIndex", "must be finite and >= 1");

  if (cfg.freqGrid.empty()) {
    issue(ConfigErrorKind::EmptyGrid, "freqGrid", "no frequencies");
  } else {
    for (std::size_t i = 0; i < cfg.freqGrid.size(); ++i) {
      if (!std::isfinite(cfg.freqGrid[i]) || cfg.freqGrid[i] <= 0.0) {
        issue(ConfigErrorKind::InvalidValue, "freqGrid",
              "entry " + std::to_string(i) + " must be finite and > 0");
        break;
      }
    }
    for (std::size_t i = 1; i < cfg.freqGrid.size(); ++i) {
      if (!(cfg.freqGrid[i] > cfg.freqGrid[i - 1])) {
        issue(ConfigErrorKind::NonMonotonicGrid, "freqGrid",
              "not strictly increasing at entry " + std::to_string(i));
        break;
      }
    }
  }
  if (cfg.delayGrid.empty()) {
    issue(ConfigErrorKind::EmptyGrid, "delayGrid", "no delays");
  } else {
    for (std::size_t i = 1; i < cfg.delayGrid.size(); ++i) {
      if (!(cfg.delayGrid[i] > cfg.delayGrid[i - 1])) {
        issue(ConfigErrorKind::NonMonotonicGrid, "delayGrid",
              "not strictly increasing at entry " + std::to_string(i));
        break;
      }
    }
  }

  const auto& q = cfg.quadrature;
  if (q.mcSamples < 2) issue(ConfigErrorKind::InvalidValue, "mcSamples", "must be >= 2");
  if (!(q.quadRelTol > 0.0 && q.quadRelTol < 0.1))
    issue(ConfigErrorKind::InvalidValue, "quadRelTol", "must lie in (0, 0.1)");
  if (q.strata == 0) issue(ConfigErrorKind::InvalidValue, "strata", "must be >= 1");
  if (q.transverseStrata == 0)
    issue(ConfigErrorKind::InvalidValue, "transverseStrata", "must be >= 1");
  if (q.maxSubdivisions == 0)
    issue(ConfigErrorKind::InvalidValue, "maxSubdivisions", "must be >= 1");

  if (report.issues.empty()) report.config = ValidatedConfig(cfg);
  return report;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view value, std::size_t line) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) +
                                           ": expected a number, got '" + std::string(value) +
                                           "'");
  }
  return out;
}

std::uint64_t parse_uint(std::string_view value, std::size_t line) {
  std::uint64_t out = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) +
                                           ": expected a non-negative integer, got '" +
                                           std::string(value) + "'");
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config_text(std::string_view text,
                                   const std::filesystem::path& base_dir) {
  ExperimentConfig cfg = ExperimentConfig::paper_defaults();

  // Grid endpoints are collected first and expanded at the end.
  double fmin = 0.1, fmax = 5.0, dmin = -2000.0, dmax = 2000.0;
  std::uint64_t fpts = 50, dpts = 201;

  using Setter = std::function<void(std::string_view, std::size_t)>;
  auto real = [](double& dst, double scale) -> Setter {
    return [&dst, scale](std::string_view v, std::size_t line) {
      dst = parse_double(v, line) * scale;
    };
  };
  auto count = [](std::uint64_t& dst) -> Setter {
    return [&dst](std::string_view v, std::size_t line) { dst = parse_uint(v, line); };
  };
  std::uint64_t mc = cfg.quadrature.mcSamples, strata = cfg.quadrature.strata,
                tstrata = cfg.quadrature.transverseStrata;
  std::string strategy(to_string(cfg.quadrature.strategy));
  std::string table;

  const std::map<std::string, Setter, std::less<>> setters{
      {"delta_r_perp_um", real(cfg.deltaRPerp, 1e-6)},
      {"waist_um", real(cfg.waist, 1e-6)},
      {"pulse_fwhm_fs", real(cfg.pulseFwhm, 1e-15)},
      {"crystal_length_mm", real(cfg.crystalLength, 1e-3)},
      {"temperature_K", real(cfg.temperature, 1.0)},
      {"probe_group_index", real(cfg.probeGroupIndex, 1.0)},
      {"freq_min_THz", real(fmin, 1.0)},
      {"freq_max_THz", real(fmax, 1.0)},
      {"freq_points", count(fpts)},
      {"delay_min_fs", real(dmin, 1.0)},
      {"delay_max_fs", real(dmax, 1.0)},
      {"delay_points", count(dpts)},
      {"mc_samples", count(mc)},
      {"mc_strata", count(strata)},
      {"mc_transverse_strata", count(tstrata)},
      {"quad_rel_tol", real(cfg.quadrature.quadRelTol, 1.0)},
      {"rng_seed", count(cfg.quadrature.rngSeed)},
      {"strategy", [&strategy](std::string_view v, std::size_t) { strategy = v; }},
      {"dispersion_table", [&table](std::string_view v, std::size_t) { table = v; }},
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
    try {
      it->second(value, line_no);
    } catch (const Error& e) {
      throw Error(ErrorKind::ParseError, "key '" + std::string(key) + "': " + e.what());
    }
  }

  cfg.freqGrid = linspace(thz_to_rad_per_s(fmin), thz_to_rad_per_s(fmax), fpts);
  cfg.delayGrid = linspace(fs_to_s(dmin), fs_to_s(dmax), dpts);
  cfg.quadrature.mcSamples = mc;
  cfg.quadrature.strata = strata;
  cfg.quadrature.transverseStrata = tstrata;
  if (strategy == "stratified-mc") {
    cfg.quadrature.strategy = Strategy::StratifiedMonteCarlo;
  } else if (strategy == "tensor-quadrature") {
    cfg.quadrature.strategy = Strategy::TensorQuadrature;
  } else {
    throw Error(ErrorKind::ParseError, "unknown strategy '" + strategy + "'");
  }
  if (!table.empty()) {
    std::filesystem::path p(table);
    cfg.dispersionTable = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.parent_path());
}

std::string format_config_text(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  auto front = [](const std::vector<double>& v) { return v.empty() ? 0.0 : v.front(); };
  auto back = [](const std::vector<double>& v) { return v.empty() ? 0.0 : v.back(); };
  out << "delta_r_perp_um = " << m_to_um(cfg.deltaRPerp) << '\n'
      << "waist_um = " << m_to_um(cfg.waist) << '\n'
      << "pulse_fwhm_fs = " << s_to_fs(cfg.pulseFwhm) << '\n'
      << "crystal_length_mm = " << m_to_mm(cfg.crystalLength) << '\n'
      << "temperature_K = " << cfg.temperature << '\n'
      << "probe_group_index = " << cfg.probeGroupIndex << '\n'
      << "freq_min_THz = " << rad_per_s_to_thz(front(cfg.freqGrid)) << '\n'
      << "freq_max_THz = " << rad_per_s_to_thz(back(cfg.freqGrid)) << '\n'
      << "freq_points = " << cfg.freqGrid.size() << '\n'
      << "delay_min_fs = " << s_to_fs(front(cfg.delayGrid)) << '\n'
      << "delay_max_fs = " << s_to_fs(back(cfg.delayGrid)) << '\n'
      << "delay_points = " << cfg.delayGrid.size() << '\n'
      << "mc_samples = " << cfg.quadrature.mcSamples << '\n'
      << "mc_strata = " << cfg.quadrature.strata << '\n'
      << "mc_transverse_strata = " << cfg.quadrature.transverseStrata << '\n'
      << "quad_rel_tol = " << cfg.quadrature.quadRelTol << '\n'
      << "rng_seed = " << cfg.quadrature.rngSeed << '\n'
      << "strategy = " << to_string(cfg.quadrature.strategy) << '\n';
  if (!cfg.dispersionTable.empty())
    out << "dispersion_table = " << cfg.dispersionTable.string() << '\n';
  return out.str();
}

std::filesystem::path default_dispersion_table() {
  if (const char* env = std::getenv("VACUUMCONE_DATA_DIR"); env && *env)
    return std::filesystem::path(env) / "znte_thz_index.csv";
  return std::filesystem::path(VACUUMCONE_DATA_DIR) / "znte_thz_index.csv";
}

}  // namespace vacuumcone
