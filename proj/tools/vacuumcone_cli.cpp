#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vacuumcone/config.hpp"
#include "vacuumcone/dispersion.hpp"
#include "vacuumcone/engine.hpp"
#include "vacuumcone/errors.hpp"
#include "vacuumcone/io.hpp"
#include "vacuumcone/signal.hpp"
#include "vacuumcone/units.hpp"
#include "vacuumcone/version.hpp"

namespace fs = std::filesystem;
using namespace vacuumcone;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitCompare = 4;

struct RunOptions {
  std::string configPath;
  std::string outDir = "out";
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  bool lowpass = false;
  std::string regions = "total,causal,noncausal";
};

struct CompareOptions {
  std::string simPath;
  std::string expPath;
  std::string outDir = ".";
  double sigma = 1.05;
  std::optional<double> bandMin;
  std::optional<double> bandMax;
};

struct DispersionOptions {
  std::string tablePath;
  std::vector<double> freqs;
  double deltaRUm = 50.0;
};

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

unsigned resolve_threads(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("VACUUMCONE_THREADS"); env && *env) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    std::cerr << "warning: ignoring VACUUMCONE_THREADS='" << env << "'\n";
  }
  return 1;
}

// Loads and validates the config; prints every issue and returns nullopt on failure.
std::optional<ValidatedConfig> load_validated(const RunOptions& opt) {
  ExperimentConfig cfg = opt.configPath.empty() ? ExperimentConfig::paper_defaults()
                                                : load_config_file(opt.configPath);
  if (opt.seed) cfg.quadrature.rngSeed = *opt.seed;
  ValidationReport report = validate_config(cfg);
  if (!report.ok()) {
    for (const auto& issue : report.issues) {
      std::cerr << "config error: " << issue.field << ": " << issue.message << " ("
                << to_string(issue.kind) << ")\n";
    }
    return std::nullopt;
  }
  return std::move(*report.config);
}

RegionSet parse_regions(const std::string& text) {
  RegionSet set{false, false, false};
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "total") set.total = true;
    else if (item == "causal") set.causal = true;
    else if (item == "noncausal") set.noncausal = true;
    else if (item == "all") set = RegionSet::all();
    else throw Error(ErrorKind::InvalidArgument, "unknown region '" + item + "'");
  }
  if (!set.total && !set.causal && !set.noncausal)
    throw Error(ErrorKind::InvalidArgument, "no region selected");
  return set;
}

void write_manifest(const fs::path& dir, const std::string& command, const RunOptions& opt,
                    double seconds, const nlohmann::json& extra) {
  nlohmann::json m;
  m["command"] = command;
  m["config_path"] = opt.configPath;
  m["output_directory"] = dir.string();
  m["version"] = std::string(kVersionString);
  m["timestamp"] = utc_now();
  m["wall_clock_s"] = seconds;
  for (const auto& [k, v] : extra.items()) m[k] = v;
  write_json(dir / "manifest.json", m);
}

int finish_sweep(const CorrelationResult& result) {
  if (!result.has_nonconvergence()) return kExitOk;
  std::cerr << "warning: " << result.provenance.flaggedPoints.size()
            << " frequency point(s) flagged as not converged\n";
  return kExitNumerical;
}

int cmd_spectrum(const RunOptions& opt, const std::string& name) {
  const auto start = std::chrono::steady_clock::now();
  const RegionSet regions = parse_regions(opt.regions);
  auto cfg = load_validated(opt);
  if (!cfg) return kExitInput;

  SweepOptions sweep;
  sweep.threads = resolve_threads(opt.threads);
  sweep.timeDomain = false;
  const CorrelationResult result = run_sweep(*cfg, regions, sweep);

  const fs::path dir(opt.outDir);
  fs::create_directories(dir);
  write_sweep_spectrum_csv(dir / "spectrum.csv", result);
  if (regions.total) write_spectrum_csv(dir / "spectrum_total.csv", total_spectrum(result));
  write_json(dir / "result.json", to_json(result));
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(dir, name, opt, secs,
                 {{"flagged_points", result.provenance.flaggedPoints},
                  {"threads", sweep.threads}});
  return finish_sweep(result);
}

int cmd_timedomain(const RunOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  auto cfg = load_validated(opt);
  if (!cfg) return kExitInput;
  check_time_domain_grids((*cfg)->freqGrid, (*cfg)->delayGrid);

  SweepOptions sweep;
  sweep.threads = resolve_threads(opt.threads);
  const CorrelationResult result = run_sweep(*cfg, RegionSet::total_only(), sweep);

  const fs::path dir(opt.outDir);
  fs::create_directories(dir);
  const TimeTrace raw = time_trace(result);
  write_trace_csv(dir / "trace.csv", raw);
  write_sweep_spectrum_csv(dir / "spectrum.csv", result);
  write_json(dir / "result.json", to_json(result));

  nlohmann::json extra{{"peak_to_peak_raw_V2_per_m2", peak_to_peak(raw.values)},
                       {"flagged_points", result.provenance.flaggedPoints},
                       {"threads", sweep.threads}};
  if (opt.lowpass) {
    const TimeTrace filtered = lowpass_3thz(raw);
    write_trace_csv(dir / "trace_lowpass.csv", filtered);
    extra["peak_to_peak_lowpass_V2_per_m2"] = peak_to_peak(filtered.values);
    extra["lowpass"] = filtered.history;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(dir, "timedomain", opt, secs, extra);
  return finish_sweep(result);
}

int cmd_compare(const CompareOptions& opt) {
  const auto load = [](const std::string& path) -> Series {
    const CsvTable probe = read_csv(path);
    if (probe.column("delta_t_fs") >= 0) return to_series(read_trace_csv(path));
    return to_series(read_spectrum_csv(path));
  };
  const Series sim = load(opt.simPath);
  const Series exp = load(opt.expPath);
  const ComparisonReport report = compare(sim, exp, opt.sigma, opt.bandMin, opt.bandMax);

  const fs::path dir(opt.outDir);
  fs::create_directories(dir);
  nlohmann::json doc = to_json(report);
  doc["sim_path"] = opt.simPath;
  doc["exp_path"] = opt.expPath;
  write_json(dir / "comparison.json", doc);

  std::printf("fraction within 2 sigma: %.4f (%zu points, sigma = %g)\n",
              report.fractionWithin2Sigma, report.grid.size(), report.sigma);
  return report.fractionWithin2Sigma >= 0.68 ? kExitOk : kExitCompare;
}

int cmd_dispersion(const DispersionOptions& opt) {
  const fs::path table = opt.tablePath.empty() ? default_dispersion_table() : fs::path(opt.tablePath);
  const DispersionModel model = load_dispersion(table);
  std::vector<double> freqs = opt.freqs;
  if (freqs.empty()) {
    for (double w : model.sample_omega()) freqs.push_back(rad_per_s_to_thz(w));
  }
  const double dr = um_to_m(opt.deltaRUm);
  std::ostringstream rows;
  char line[200];
  double nSum = 0.0;
  for (double f : freqs) {
    const double w = thz_to_rad_per_s(f);
    const double n = model.refractive_index(w);
    const double ng = model.group_index(w);
    nSum += n;
    std::snprintf(line, sizeof line, "%.6g,%.9g,%.9g,%.9e,%.9g,%.9g\n", f, n, ng, model.cone_speed(w),
                  s_to_fs(dr * n / kConstants.c), s_to_fs(dr * ng / kConstants.c));
    rows << line;
  }
  const double nMean = nSum / static_cast<double>(freqs.size());
  std::printf("# table: %s\n", table.string().c_str());
  std::printf("# mean n over listed frequencies: %.9g, flight time %.9g fs over %g um\n", nMean,
              s_to_fs(dr * nMean / kConstants.c), opt.deltaRUm);
  std::printf("freq_THz,n,n_g,cone_speed_m_per_s,flight_time_phase_fs,flight_time_group_fs\n%s",
              rows.str().c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-beam electro-optic sampling of vacuum field correlations"};
  app.set_version_flag("--version", std::string(kVersionString));
  app.require_subcommand(1);

  RunOptions run;
  auto add_run_flags = [&run](CLI::App* sub) {
    sub->add_option("--config", run.configPath, "Config file (key = value)")->check(CLI::ExistingFile);
    sub->add_option("--out", run.outDir, "Output directory (created if missing)");
    sub->add_option("--seed", run.seed, "Override rng_seed");
    sub->add_option("--threads", run.threads, "Worker threads (default: VACUUMCONE_THREADS or 1)");
  };

  auto* spectrum = app.add_subcommand("spectrum", "Per-frequency spectrum with light-cone split");
  add_run_flags(spectrum);
  auto* split = app.add_subcommand("split", "Spectrum restricted to selected regions");
  add_run_flags(split);
  split->add_option("--regions", run.regions, "Comma list of total, causal, noncausal");

  auto* timedomain = app.add_subcommand("timedomain", "Time-domain correlation trace");
  add_run_flags(timedomain);
  timedomain->add_flag("--lowpass", run.lowpass, "Also write the 3 THz low-passed trace");

  CompareOptions cmp;
  auto* compare_cmd = app.add_subcommand("compare", "Compare simulated and measured CSV files");
  compare_cmd->add_option("sim", cmp.simPath, "Simulated trace or spectrum")->required();
  compare_cmd->add_option("exp", cmp.expPath, "Measured trace or spectrum")->required();
  compare_cmd->add_option("--sigma", cmp.sigma, "Measurement uncertainty, V^2/m^2")
      ->check(CLI::PositiveNumber);
  compare_cmd->add_option("--band-min", cmp.bandMin, "Lower end of the compared band");
  compare_cmd->add_option("--band-max", cmp.bandMax, "Upper end of the compared band");
  compare_cmd->add_option("--out", cmp.outDir, "Directory for comparison.json");

  DispersionOptions disp;
  auto* dispersion = app.add_subcommand("dispersion", "Print n, n_g and light-cone data");
  dispersion->add_option("table", disp.tablePath, "Index table (default: bundled ZnTe)");
  dispersion->add_option("--freq", disp.freqs, "Frequencies in THz (default: table grid)");
  dispersion->add_option("--delta-r-um", disp.deltaRUm, "Separation for the flight time");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*spectrum) return cmd_spectrum(run, "spectrum");
    if (*split) return cmd_spectrum(run, "split");
    if (*timedomain) return cmd_timedomain(run);
    if (*compare_cmd) return cmd_compare(cmp);
    if (*dispersion) return cmd_dispersion(disp);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
