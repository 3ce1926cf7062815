#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "vacuumcone/config.hpp"
#include "vacuumcone/dispersion.hpp"
#include "vacuumcone/engine.hpp"
#include "vacuumcone/errors.hpp"
#include "vacuumcone/io.hpp"
#include "vacuumcone/lightcone.hpp"
#include "vacuumcone/probe_kernel.hpp"
#include "vacuumcone/signal.hpp"
#include "vacuumcone/vacuum_field.hpp"
#include "vacuumcone/version.hpp"

namespace py = pybind11;
using namespace vacuumcone;

namespace {

ValidatedConfig validated(const ExperimentConfig& cfg) {
  ValidationReport report = validate_config(cfg);
  if (!report.ok()) {
    std::string msg = "invalid config:";
    for (const auto& issue : report.issues) msg += " " + issue.field + " (" + issue.message + ");";
    throw py::value_error(msg);
  }
  return *report.config;
}

RegionSet region_set(const std::vector<std::string>& names) {
  RegionSet set{false, false, false};
  for (const auto& n : names) {
    if (n == "total") set.total = true;
    else if (n == "causal") set.causal = true;
    else if (n == "noncausal") set.noncausal = true;
    else throw py::value_error("unknown region '" + n + "'");
  }
  return set;
}

Region region_from(const std::string& name) {
  if (name == "total") return Region::Total;
  if (name == "causal") return Region::Causal;
  if (name == "noncausal") return Region::NonCausal;
  throw py::value_error("unknown region '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-beam electro-optic sampling of vacuum field correlations";
  m.attr("__version__") = std::string(kVersionString);

  py::register_exception<Error>(m, "VacuumconeError", PyExc_ValueError);

  m.def("thz_to_rad_per_s", &thz_to_rad_per_s);
  m.def("rad_per_s_to_thz", &rad_per_s_to_thz);

  py::class_<Vec3>(m, "Vec3")
      .def(py::init<double, double, double>(), py::arg("x") = 0.0, py::arg("y") = 0.0,
           py::arg("z") = 0.0)
      .def_readwrite("x", &Vec3::x)
      .def_readwrite("y", &Vec3::y)
      .def_readwrite("z", &Vec3::z)
      .def("norm", &Vec3::norm);

  py::enum_<Strategy>(m, "Strategy")
      .value("StratifiedMonteCarlo", Strategy::StratifiedMonteCarlo)
      .value("TensorQuadrature", Strategy::TensorQuadrature);

  py::class_<QuadratureSpec>(m, "QuadratureSpec")
      .def(py::init<>())
      .def_readwrite("mc_samples", &QuadratureSpec::mcSamples)
      .def_readwrite("rng_seed", &QuadratureSpec::rngSeed)
      .def_readwrite("quad_rel_tol", &QuadratureSpec::quadRelTol)
      .def_readwrite("max_subdivisions", &QuadratureSpec::maxSubdivisions)
      .def_readwrite("strategy", &QuadratureSpec::strategy)
      .def_readwrite("strata", &QuadratureSpec::strata)
      .def_readwrite("transverse_strata", &QuadratureSpec::transverseStrata);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_static("paper_defaults", &ExperimentConfig::paper_defaults)
      .def_readwrite("delta_r_perp", &ExperimentConfig::deltaRPerp)
      .def_readwrite("waist", &ExperimentConfig::waist)
      .def_readwrite("pulse_fwhm", &ExperimentConfig::pulseFwhm)
      .def_readwrite("crystal_length", &ExperimentConfig::crystalLength)
      .def_readwrite("temperature", &ExperimentConfig::temperature)
      .def_readwrite("probe_group_index", &ExperimentConfig::probeGroupIndex)
      .def_readwrite("freq_grid", &ExperimentConfig::freqGrid)
      .def_readwrite("delay_grid", &ExperimentConfig::delayGrid)
      .def_readwrite("quadrature", &ExperimentConfig::quadrature)
      .def_readwrite("dispersion_table", &ExperimentConfig::dispersionTable)
      .def("to_text", &format_config_text);

  py::class_<ConfigIssue>(m, "ConfigIssue")
      .def_readonly("field", &ConfigIssue::field)
      .def_readonly("message", &ConfigIssue::message)
      .def_property_readonly("kind", [](const ConfigIssue& i) { return std::string(to_string(i.kind)); });

  m.def("validate_config", [](const ExperimentConfig& cfg) { return validate_config(cfg).issues; },
        "List of problems; empty when the config is valid.");
  m.def("load_config_file", &load_config_file);
  m.def("parse_config_text", &parse_config_text, py::arg("text"),
        py::arg("base_dir") = std::filesystem::path{});
  m.def("linspace", &linspace);
  m.def("default_dispersion_table", &default_dispersion_table);

  py::class_<DispersionModel>(m, "DispersionModel")
      .def_static("from_samples",
                  [](const std::vector<double>& w, const std::vector<double>& n) {
                    return DispersionModel::from_samples(w, n);
                  })
      .def_static("constant", &DispersionModel::constant)
      .def("refractive_index", &DispersionModel::refractive_index)
      .def("group_index", &DispersionModel::group_index)
      .def("cone_speed", &DispersionModel::cone_speed)
      .def("contains", &DispersionModel::contains)
      .def_property_readonly("omega_min", &DispersionModel::omega_min)
      .def_property_readonly("omega_max", &DispersionModel::omega_max);
  m.def("load_dispersion", &load_dispersion);

  py::class_<PairKernel>(m, "PairKernel")
      .def_static("from_config", &PairKernel::from_config, py::arg("config"), py::arg("delay") = 0.0)
      .def_property_readonly("delta_r_perp", &PairKernel::delta_r_perp)
      .def_property_readonly("delay", &PairKernel::delay)
      .def("lag_transverse_sigma", &PairKernel::lag_transverse_sigma)
      .def("lag_temporal_sigma", &PairKernel::lag_temporal_sigma);
  m.def("pair_kernel", &pair_kernel);

  m.def("green_tensor_im_xx", &green_tensor_im_xx);
  m.def("thermal_factor", &thermal_factor);
  m.def("band_limited_commutator", [](const Vec3& dr, double dt, double n, double cutoff) {
    const SignedLog v = band_limited_commutator(dr, dt, n, cutoff);
    return py::make_tuple(v.logAbs, v.sign);
  }, "Returns (log|value|, sign).");

  py::class_<VacuumCorrelator>(m, "VacuumCorrelator")
      .def(py::init<DispersionModel, double>())
      .def("spectral_prefactor", &VacuumCorrelator::spectral_prefactor)
      .def("anticommutator", &VacuumCorrelator::anticommutator)
      .def("commutator_kernel", &VacuumCorrelator::commutator_kernel);

  py::class_<ConeClassifier>(m, "ConeClassifier")
      .def(py::init<DispersionModel>())
      .def("is_causal", [](const ConeClassifier& c, const Vec3& dr, double dt, double w) {
        return c.classify(dr, dt, w) == Cone::Causal;
      })
      .def("cone_radius", &ConeClassifier::cone_radius)
      .def("flight_time", &ConeClassifier::flight_time);

  py::class_<EngineResult>(m, "EngineResult")
      .def_readonly("value", &EngineResult::value)
      .def_readonly("stat_error", &EngineResult::statError)
      .def_readonly("neval", &EngineResult::neval)
      .def_readonly("converged", &EngineResult::converged)
      .def_property_readonly("path", [](const EngineResult& r) { return std::string(to_string(r.path)); });

  py::class_<SplitResult>(m, "SplitResult")
      .def_readonly("total", &SplitResult::total)
      .def_readonly("causal", &SplitResult::causal)
      .def_readonly("noncausal", &SplitResult::noncausal);

  m.def("g1_split_realspace", &g1_split_realspace);
  m.def("g1_per_frequency_realspace",
        [](const PairKernel& p, const VacuumCorrelator& c, const ConeClassifier& cls, double w,
           const std::string& region, const QuadratureSpec& spec) {
          return g1_per_frequency_realspace(p, c, cls, w, region_from(region), spec);
        });
  m.def("g1_per_frequency_momentum", &g1_per_frequency_momentum, py::arg("pair"),
        py::arg("correlator"), py::arg("omega"), py::arg("spec") = QuadratureSpec{});
  m.def("g1_time_domain", [](const std::vector<double>& w, const std::vector<double>& v,
                             const std::vector<double>& d) { return g1_time_domain(w, v, d); });
  m.def("engine_to_spectral_density", &engine_to_spectral_density);

  py::class_<FrequencyPoint>(m, "FrequencyPoint")
      .def_readonly("omega", &FrequencyPoint::omega)
      .def_readonly("total", &FrequencyPoint::total)
      .def_readonly("causal", &FrequencyPoint::causal)
      .def_readonly("noncausal", &FrequencyPoint::noncausal)
      .def_readonly("momentum", &FrequencyPoint::momentum)
      .def_readonly("flagged", &FrequencyPoint::flagged)
      .def_readonly("failure", &FrequencyPoint::failure);

  py::class_<CorrelationResult>(m, "CorrelationResult")
      .def_readonly("per_frequency", &CorrelationResult::perFrequency)
      .def_readonly("delays", &CorrelationResult::delays)
      .def_readonly("time_domain", &CorrelationResult::timeDomain)
      .def_readonly("config", &CorrelationResult::config)
      .def("has_nonconvergence", &CorrelationResult::has_nonconvergence)
      .def_property_readonly("flagged_points",
                             [](const CorrelationResult& r) { return r.provenance.flaggedPoints; })
      .def("to_json", [](const CorrelationResult& r) { return to_json(r).dump(); });

  m.def("run_sweep",
        [](const ExperimentConfig& cfg, const std::vector<std::string>& regions, unsigned threads,
           bool time_domain, bool momentum) {
          const ValidatedConfig v = validated(cfg);
          SweepOptions opt;
          opt.threads = threads;
          opt.timeDomain = time_domain;
          opt.momentum = momentum;
          py::gil_scoped_release release;
          return run_sweep(v, region_set(regions), opt);
        },
        py::arg("config"), py::arg("regions") = std::vector<std::string>{"total", "causal", "noncausal"},
        py::arg("threads") = 1u, py::arg("time_domain") = true, py::arg("momentum") = true);

  py::class_<TimeTrace>(m, "TimeTrace")
      .def(py::init<>())
      .def(py::init([](std::vector<double> d, std::vector<double> v) {
        TimeTrace t;
        t.delays = std::move(d);
        t.values = std::move(v);
        return t;
      }), py::arg("delays"), py::arg("values"))
      .def_readwrite("delays", &TimeTrace::delays)
      .def_readwrite("values", &TimeTrace::values)
      .def_readwrite("sigma", &TimeTrace::sigma)
      .def_readonly("history", &TimeTrace::history);

  py::class_<Spectrum>(m, "Spectrum")
      .def(py::init<>())
      .def_readwrite("freqs", &Spectrum::freqs)
      .def_readwrite("values", &Spectrum::values)
      .def_readwrite("errors", &Spectrum::errors);

  py::class_<ComparisonReport>(m, "ComparisonReport")
      .def_readonly("grid", &ComparisonReport::grid)
      .def_readonly("residuals", &ComparisonReport::residuals)
      .def_readonly("sigma", &ComparisonReport::sigma)
      .def_readonly("fraction_within_2sigma", &ComparisonReport::fractionWithin2Sigma)
      .def_readonly("sim_peak_x", &ComparisonReport::simPeakX)
      .def_readonly("exp_peak_x", &ComparisonReport::expPeakX);

  m.def("wiener_khinchin", &wiener_khinchin);
  m.def("lowpass", &lowpass);
  m.def("lowpass_3thz", &lowpass_3thz);
  m.def("analytic_envelope", &analytic_envelope);
  m.def("peak_to_peak", [](const std::vector<double>& v) { return peak_to_peak(v); });
  m.def("compare_traces",
        [](const TimeTrace& sim, const TimeTrace& exp, double sigma) {
          return compare(to_series(sim), to_series(exp), sigma);
        },
        py::arg("sim"), py::arg("exp"), py::arg("sigma") = 1.05);
  m.def("compare_spectra",
        [](const Spectrum& sim, const Spectrum& exp, double sigma, std::optional<double> lo,
           std::optional<double> hi) { return compare(to_series(sim), to_series(exp), sigma, lo, hi); },
        py::arg("sim"), py::arg("exp"), py::arg("sigma") = 1.05, py::arg("band_min") = py::none(),
        py::arg("band_max") = py::none());

  m.def("total_spectrum", &total_spectrum);
  m.def("time_trace", &time_trace);
  m.def("read_trace_csv", &read_trace_csv);
  m.def("write_trace_csv", &write_trace_csv);
  m.def("read_spectrum_csv", &read_spectrum_csv);
  m.def("write_spectrum_csv", &write_spectrum_csv);
  m.def("write_sweep_spectrum_csv", &write_sweep_spectrum_csv);
}
