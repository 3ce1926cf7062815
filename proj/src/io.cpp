#include "vacuumcone/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vacuumcone/errors.hpp"
#include "vacuumcone/units.hpp"

namespace vacuumcone {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string num(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  CsvTable table;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw Error(ErrorKind::ParseError, path.filename().string() + " row " + std::to_string(row) +
                                             ": expected " + std::to_string(table.header.size()) +
                                             " columns, got " + std::to_string(cells.size()));
    }
    std::vector<double> values;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c].empty()) {
        values.push_back(std::nan(""));
        continue;
      }
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cells[c], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != cells[c].size()) {
        throw Error(ErrorKind::ParseError, path.filename().string() + " row " +
                                               std::to_string(row) + ", column " +
                                               std::to_string(c + 1) + ": not a number '" +
                                               cells[c] + "'");
      }
      values.push_back(v);
    }
    table.rows.push_back(std::move(values));
  }
  if (table.header.empty()) throw Error(ErrorKind::ParseError, path.string() + ": empty file");
  return table;
}

TimeTrace read_trace_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  const int ct = t.column("delta_t_fs");
  const int cg = t.column("G_V2_per_m2");
  const int cs = t.column("sigma");
  if (ct != 0 || cg != 1 || (t.header.size() == 3 && cs != 2) || t.header.size() > 3) {
    throw Error(ErrorKind::ParseError,
                path.string() + ": expected header 'delta_t_fs,G_V2_per_m2[,sigma]'");
  }
  TimeTrace trace;
  for (const auto& r : t.rows) {
    trace.delays.push_back(fs_to_s(r[0]));
    trace.values.push_back(r[1]);
    if (cs >= 0) trace.sigma.push_back(r[2]);
  }
  return trace;
}

void write_trace_csv(const std::filesystem::path& path, const TimeTrace& trace) {
  auto out = open_out(path);
  out << "delta_t_fs,G_V2_per_m2" << (trace.sigma.empty() ? "" : ",sigma") << '\n';
  for (std::size_t i = 0; i < trace.values.size(); ++i) {
    out << num(s_to_fs(trace.delays[i])) << ',' << num(trace.values[i]);
    if (!trace.sigma.empty()) out << ',' << num(trace.sigma[i]);
    out << '\n';
  }
}

Spectrum read_spectrum_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  int cf = t.column("freq_THz");
  int cg = t.column("G");
  int ce = t.column("err");
  if (cg < 0) {
    cg = t.column("total");
    ce = t.column("total_err");
  }
  if (cf != 0 || cg < 0) {
    throw Error(ErrorKind::ParseError, path.string() + ": expected header 'freq_THz,G,err'");
  }
  Spectrum s;
  for (const auto& r : t.rows) {
    if (std::isnan(r[cg])) continue;  // flagged sweep point
    s.freqs.push_back(r[cf]);
    s.values.push_back(r[cg]);
    if (ce >= 0) s.errors.push_back(r[ce]);
  }
  return s;
}

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum) {
  auto out = open_out(path);
  out << "freq_THz,G,err\n";
  for (std::size_t i = 0; i < spectrum.values.size(); ++i) {
    out << num(spectrum.freqs[i]) << ',' << num(spectrum.values[i]) << ','
        << (spectrum.errors.empty() ? num(0.0) : num(spectrum.errors[i])) << '\n';
  }
}

double engine_to_spectral_density(double value) { return 0.5 * value * kTwoPi * 1e12; }

void write_sweep_spectrum_csv(const std::filesystem::path& path, const CorrelationResult& result) {
  auto out = open_out(path);
  out << "freq_THz,total,total_err,causal,causal_err,noncausal,noncausal_err,momentum,momentum_err\n";
  auto cells = [&](const std::optional<EngineResult>& r) {
    if (!r) return std::string(",");
    return num(engine_to_spectral_density(r->value)) + ',' +
           num(engine_to_spectral_density(r->statError));
  };
  for (const auto& p : result.perFrequency) {
    out << num(rad_per_s_to_thz(p.omega)) << ',' << cells(p.total) << ',' << cells(p.causal)
        << ',' << cells(p.noncausal) << ',' << cells(p.momentum) << '\n';
  }
}

Spectrum total_spectrum(const CorrelationResult& result) {
  Spectrum s;
  for (const auto& p : result.perFrequency) {
    if (!p.total) continue;
    s.freqs.push_back(rad_per_s_to_thz(p.omega));
    s.values.push_back(engine_to_spectral_density(p.total->value));
    s.errors.push_back(engine_to_spectral_density(p.total->statError));
  }
  return s;
}

TimeTrace time_trace(const CorrelationResult& result) {
  TimeTrace t;
  t.delays = result.delays;
  t.values = result.timeDomain;
  t.history.push_back("cosine synthesis of the real-space total spectrum");
  return t;
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["delta_r_perp_um"] = m_to_um(cfg.deltaRPerp);
  j["waist_um"] = m_to_um(cfg.waist);
  j["pulse_fwhm_fs"] = s_to_fs(cfg.pulseFwhm);
  j["crystal_length_mm"] = m_to_mm(cfg.crystalLength);
  j["temperature_K"] = cfg.temperature;
  j["probe_group_index"] = cfg.probeGroupIndex;
  std::vector<double> f, d;
  for (double w : cfg.freqGrid) f.push_back(rad_per_s_to_thz(w));
  for (double t : cfg.delayGrid) d.push_back(s_to_fs(t));
  j["freq_grid_THz"] = f;
  j["delay_grid_fs"] = d;
  j["mc_samples"] = cfg.quadrature.mcSamples;
  j["mc_strata"] = cfg.quadrature.strata;
  j["mc_transverse_strata"] = cfg.quadrature.transverseStrata;
  j["quad_rel_tol"] = cfg.quadrature.quadRelTol;
  j["rng_seed"] = cfg.quadrature.rngSeed;
  j["strategy"] = std::string(to_string(cfg.quadrature.strategy));
  j["dispersion_table"] = cfg.dispersionTable.string();
  return j;
}

nlohmann::json to_json(const CorrelationResult& result) {
  nlohmann::json j;
  j["config"] = to_json(result.config);
  const auto& p = result.provenance;
  j["provenance"] = {
      {"engine_path", p.enginePath},
      {"strategy", p.strategy},
      {"timestamp", p.timestamp},
      {"version", p.version},
      {"waist_convention", p.waistConvention},
      {"pulse_convention", p.pulseConvention},
      {"spectrum_convention", p.spectrumConvention},
      {"dispersion_table", p.dispersionTable},
      {"threads", p.threads},
      {"flagged_points", p.flaggedPoints},
  };
  j["units"] = {{"spectrum", "V^2/m^2 per THz"}, {"time_domain", "V^2/m^2"}};

  nlohmann::json per;
  std::vector<double> freqs;
  std::vector<bool> flagged;
  std::vector<std::string> failures;
  for (const auto& pt : result.perFrequency) {
    freqs.push_back(rad_per_s_to_thz(pt.omega));
    flagged.push_back(pt.flagged);
    failures.push_back(pt.failure);
  }
  per["freq_THz"] = freqs;
  auto column = [&](const char* name, auto member) {
    nlohmann::json values = nlohmann::json::array(), errors = nlohmann::json::array();
    for (const auto& pt : result.perFrequency) {
      const auto& r = pt.*member;
      if (r) {
        values.push_back(engine_to_spectral_density(r->value));
        errors.push_back(engine_to_spectral_density(r->statError));
      } else {
        values.push_back(nullptr);
        errors.push_back(nullptr);
      }
    }
    per[name] = values;
    per[std::string(name) + "_err"] = errors;
  };
  column("total", &FrequencyPoint::total);
  column("causal", &FrequencyPoint::causal);
  column("noncausal", &FrequencyPoint::noncausal);
  column("momentum", &FrequencyPoint::momentum);
  per["flagged"] = flagged;
  per["failure"] = failures;
  j["per_frequency"] = per;

  std::vector<double> delays;
  for (double t : result.delays) delays.push_back(s_to_fs(t));
  j["time_domain"] = {{"delta_t_fs", delays}, {"G_V2_per_m2", result.timeDomain}};
  return j;
}

nlohmann::json to_json(const ComparisonReport& r) {
  return {
      {"grid", r.grid},
      {"residuals", r.residuals},
      {"sigma", r.sigma},
      {"fraction_within_2sigma", r.fractionWithin2Sigma},
      {"sim_peak", {{"x", r.simPeakX}, {"value", r.simPeakValue}}},
      {"exp_peak", {{"x", r.expPeakX}, {"value", r.expPeakValue}}},
  };
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

}  // namespace vacuumcone
