#include "vacuumcone/dispersion.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "vacuumcone/errors.hpp"
#include "vacuumcone/units.hpp"

namespace vacuumcone {

struct DispersionModel::Spline {
  explicit Spline(const std::vector<double>& x, const std::vector<double>& y)
      : handle(gsl_spline_alloc(gsl_interp_cspline, x.size()), &gsl_spline_free) {
    gsl_spline_init(handle.get(), x.data(), y.data(), x.size());
  }
  // Evaluation with a null accelerator is reentrant.
  double eval(double x) const { return gsl_spline_eval(handle.get(), x, nullptr); }
  double deriv(double x) const { return gsl_spline_eval_deriv(handle.get(), x, nullptr); }

  std::unique_ptr<gsl_spline, decltype(&gsl_spline_free)> handle;
};

DispersionModel::DispersionModel(std::vector<double> omega, std::vector<double> index)
    : omega_(std::move(omega)), index_(std::move(index)) {
  static const bool handler_off = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)handler_off;
  spline_ = std::make_shared<const Spline>(omega_, index_);
}

DispersionModel DispersionModel::from_samples(std::span<const double> omega,
                                              std::span<const double> n) {
  if (omega.size() != n.size())
    throw Error(ErrorKind::InvalidArgument, "frequency and index columns differ in length");

  std::vector<std::size_t> order(omega.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return omega[a] < omega[b]; });

  std::vector<double> xs, ys;
  for (std::size_t i : order) {
    if (!std::isfinite(omega[i]) || omega[i] < 0.0)
      throw Error(ErrorKind::ParseError, "sample " + std::to_string(i) + ": invalid frequency");
    if (!std::isfinite(n[i]) || n[i] < 1.0) {
      throw Error(ErrorKind::NonPhysicalIndex,
                  "sample " + std::to_string(i) + ": n = " + std::to_string(n[i]) + " < 1");
    }
    if (!xs.empty() && xs.back() == omega[i]) {
      if (ys.back() != n[i]) {
        throw Error(ErrorKind::ParseError,
                    "sample " + std::to_string(i) + ": frequency repeated with a different index");
      }
      continue;
    }
    xs.push_back(omega[i]);
    ys.push_back(n[i]);
  }
  if (xs.size() < 4) {
    throw Error(ErrorKind::TooFewSamples,
                "need at least 4 distinct samples, got " + std::to_string(xs.size()));
  }
  return DispersionModel(std::move(xs), std::move(ys));
}

DispersionModel DispersionModel::constant(double n, double omega_min, double omega_max) {
  if (!(omega_max > omega_min))
    throw Error(ErrorKind::InvalidArgument, "empty frequency range");
  std::vector<double> xs;
  for (int i = 0; i < 4; ++i) xs.push_back(omega_min + (omega_max - omega_min) * i / 3.0);
  xs.back() = omega_max;
  std::vector<double> ys(4, n);
  return from_samples(xs, ys);
}

bool DispersionModel::contains(double omega) const {
  const double slack = 1e-12 * omega_max();
  return omega >= omega_min() - slack && omega <= omega_max() + slack;
}

double DispersionModel::clamp_checked(double omega) const {
  if (!std::isfinite(omega) || !contains(omega)) {
    std::ostringstream msg;
    msg << "omega = " << omega << " rad/s (" << rad_per_s_to_thz(omega)
        << " THz) outside [" << rad_per_s_to_thz(omega_min()) << ", "
        << rad_per_s_to_thz(omega_max()) << "] THz";
    throw Error(ErrorKind::OutOfRange, msg.str());
  }
  return std::clamp(omega, omega_min(), omega_max());
}

double DispersionModel::refractive_index(double omega) const {
  return spline_->eval(clamp_checked(omega));
}

double DispersionModel::group_index(double omega) const {
  const double w = clamp_checked(omega);
  return spline_->eval(w) + w * spline_->deriv(w);
}

double DispersionModel::cone_speed(double omega) const {
  return kConstants.c / refractive_index(omega);
}

DispersionModel load_dispersion(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open dispersion table '" + path.string() + "'");

  std::string line;
  std::size_t row = 0;
  std::vector<double> omega, n;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "freq_THz,n") {
        throw Error(ErrorKind::ParseError,
                    "row 1: expected header 'freq_THz,n', got '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw Error(ErrorKind::ParseError, "row " + std::to_string(row) + ": expected 2 columns");
    }
    auto parse = [&](const std::string& cell, int column) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != cell.size()) {
        throw Error(ErrorKind::ParseError, "row " + std::to_string(row) + ", column " +
                                               std::to_string(column) + ": not a number '" +
                                               cell + "'");
      }
      return v;
    };
    omega.push_back(thz_to_rad_per_s(parse(line.substr(0, comma), 1)));
    n.push_back(parse(line.substr(comma + 1), 2));
  }
  if (!header_seen) throw Error(ErrorKind::ParseError, "empty dispersion table");
  return DispersionModel::from_samples(omega, n);
}

}  // namespace vacuumcone
