#include "vacuumcone/signal.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include "vacuumcone/errors.hpp"
#include "vacuumcone/units.hpp"

namespace vacuumcone {

namespace {

constexpr double kPi = std::numbers::pi;

// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

std::vector<std::complex<double>> forward_dft(const std::vector<double>& in) {
  const int n = static_cast<int>(in.size());
  std::vector<double> buf(in);
  std::vector<std::complex<double>> out(in.size() / 2 + 1);
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_r2c_1d(n, buf.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                    FFTW_ESTIMATE));
  }
  fftw_execute(plan.get());
  return out;
}

std::vector<double> inverse_dft(std::vector<std::complex<double>> half, std::size_t n) {
  std::vector<double> out(n);
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_c2r_1d(static_cast<int>(n),
                                    reinterpret_cast<fftw_complex*>(half.data()), out.data(),
                                    FFTW_ESTIMATE));
  }
  fftw_execute(plan.get());
  for (double& v : out) v /= static_cast<double>(n);
  return out;
}

double bin_frequency_hz(std::size_t k, std::size_t n, double dt) {
  return static_cast<double>(k) / (static_cast<double>(n) * dt);
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  const auto it = std::lower_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return ys.front();
  if (it == xs.end()) return ys.back();
  const std::size_t i = static_cast<std::size_t>(it - xs.begin());
  if (*it == x) return ys[i];
  const double f = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + f * (ys[i] - ys[i - 1]);
}

}  // namespace

double TimeTrace::spacing() const {
  if (delays.size() < 2) return 0.0;
  return (delays.back() - delays.front()) / static_cast<double>(delays.size() - 1);
}

void TimeTrace::check() const {
  if (delays.size() != values.size() || (!sigma.empty() && sigma.size() != values.size()))
    throw Error(ErrorKind::InvalidArgument, "trace column lengths differ");
  if (delays.size() < 2) throw Error(ErrorKind::InvalidArgument, "trace needs >= 2 samples");
  const double h = spacing();
  if (!(h > 0.0)) throw Error(ErrorKind::NonUniformSpacing, "delays not increasing");
  for (std::size_t i = 1; i < delays.size(); ++i) {
    const double d = delays[i] - delays[i - 1];
    if (std::abs(d - h) > 1e-9 * h * static_cast<double>(delays.size())) {
      throw Error(ErrorKind::NonUniformSpacing,
                  "spacing at sample " + std::to_string(i) + " deviates from the mean step");
    }
  }
}

std::string Window::describe() const {
  std::ostringstream out;
  if (kind == Kind::Hann) {
    out << "hann";
  } else {
    out << "tukey(" << alpha << ")";
  }
  return out.str();
}

std::vector<double> window_weights(const Window& window, std::size_t length) {
  std::vector<double> w(length, 1.0);
  if (length < 2) return w;
  const double alpha = window.kind == Window::Kind::Hann ? 1.0 : window.alpha;
  if (alpha <= 0.0) return w;
  for (std::size_t i = 0; i < length; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(length - 1);
    if (x < alpha / 2.0) {
      w[i] = 0.5 * (1.0 + std::cos(kPi * (2.0 * x / alpha - 1.0)));
    } else if (x > 1.0 - alpha / 2.0) {
      w[i] = 0.5 * (1.0 + std::cos(kPi * (2.0 * x / alpha - 2.0 / alpha + 1.0)));
    }
  }
  return w;
}

TimeTrace apodize(const TimeTrace& trace, const Window& window) {
  trace.check();
  TimeTrace out = trace;
  const auto w = window_weights(window, trace.values.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    out.values[i] *= w[i];
    if (!out.sigma.empty()) out.sigma[i] *= w[i];
  }
  out.history.push_back("apodize " + window.describe());
  return out;
}

Spectrum wiener_khinchin(const TimeTrace& trace) {
  trace.check();
  const std::size_t n = trace.values.size();
  if (n < 8) throw Error(ErrorKind::InvalidArgument, "spectral estimate needs >= 8 samples");
  const double dt = trace.spacing();
  const double t0 = trace.delays.front();
  const auto dft = forward_dft(trace.values);

  Spectrum s;
  for (std::size_t k = 0; k < dft.size(); ++k) {
    const double f = bin_frequency_hz(k, n, dt);
    const double omega = 2.0 * kPi * f;
    // sum_j G_j exp(+i omega t_j) = exp(i omega t0) conj(X_k)
    const std::complex<double> phase = std::polar(1.0, omega * t0);
    const double per_rad = dt / (2.0 * kPi) * (phase * std::conj(dft[k])).real();
    s.freqs.push_back(f * 1e-12);
    s.values.push_back(per_rad * kTwoPi * 1e12);
  }
  return s;
}

TimeTrace inverse_wiener_khinchin(const Spectrum& spectrum, std::span<const double> delays) {
  TimeTrace out;
  out.delays.assign(delays.begin(), delays.end());
  const std::size_t n = delays.size();
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "need >= 2 delays");
  const double dt = (delays.back() - delays.front()) / static_cast<double>(n - 1);
  const std::size_t bins = n / 2 + 1;
  if (spectrum.values.size() < bins)
    throw Error(ErrorKind::InvalidArgument, "spectrum shorter than the delay grid requires");
  out.values.assign(n, 0.0);
  const double scale = 2.0 * kPi / (static_cast<double>(n) * dt);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
      const double per_rad = spectrum.values[k] / (kTwoPi * 1e12);
      const double omega = 2.0 * kPi * bin_frequency_hz(k, n, dt);
      const bool single = k == 0 || (n % 2 == 0 && k == n / 2);
      acc += (single ? 1.0 : 2.0) * per_rad * std::cos(omega * delays[j]);
    }
    out.values[j] = scale * acc;
  }
  return out;
}

TimeTrace lowpass(const TimeTrace& trace, double passThz, double stopThz) {
  trace.check();
  if (!(stopThz > passThz && passThz >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "lowpass needs 0 <= pass < stop");
  const std::size_t n = trace.values.size();
  const double dt = trace.spacing();
  auto spectrum = forward_dft(trace.values);
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const double f = bin_frequency_hz(k, n, dt) * 1e-12;
    double gain = 1.0;
    if (f >= stopThz) {
      gain = 0.0;
    } else if (f > passThz) {
      gain = 0.5 * (1.0 + std::cos(kPi * (f - passThz) / (stopThz - passThz)));
    }
    spectrum[k] *= gain;
  }
  TimeTrace out = trace;
  out.values = inverse_dft(std::move(spectrum), n);
  std::ostringstream note;
  note << "lowpass " << passThz << "-" << stopThz << " THz raised-cosine";
  out.history.push_back(note.str());
  return out;
}

TimeTrace lowpass_3thz(const TimeTrace& trace) { return lowpass(trace, 2.8, 3.2); }

std::vector<double> analytic_envelope(const TimeTrace& trace) {
  trace.check();
  const std::size_t n = trace.values.size();
  const auto half = forward_dft(trace.values);
  // Full-length analytic spectrum: keep DC (and Nyquist), double positives.
  std::vector<std::complex<double>> full(n, 0.0);
  for (std::size_t k = 0; k < half.size(); ++k) {
    const bool single = k == 0 || (n % 2 == 0 && k == n / 2);
    full[k] = (single ? 1.0 : 2.0) * half[k];
  }
  std::vector<std::complex<double>> signal(n);
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(full.data()),
                                reinterpret_cast<fftw_complex*>(signal.data()), FFTW_BACKWARD,
                                FFTW_ESTIMATE));
  }
  fftw_execute(plan.get());
  std::vector<double> env(n);
  for (std::size_t i = 0; i < n; ++i) env[i] = std::abs(signal[i]) / static_cast<double>(n);
  return env;
}

double peak_to_peak(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

Series to_series(const TimeTrace& trace) {
  Series s;
  for (double d : trace.delays) s.x.push_back(s_to_fs(d));
  s.y = trace.values;
  return s;
}

Series to_series(const Spectrum& spectrum) { return {spectrum.freqs, spectrum.values}; }

ComparisonReport compare(const Series& sim, const Series& exp, double sigma,
                         std::optional<double> bandLo, std::optional<double> bandHi) {
  for (const Series* s : {&sim, &exp}) {
    if (s->x.size() != s->y.size() || s->x.empty())
      throw Error(ErrorKind::InvalidArgument, "series must be non-empty with matching columns");
    if (!std::is_sorted(s->x.begin(), s->x.end()))
      throw Error(ErrorKind::InvalidArgument, "series abscissa must be increasing");
  }
  if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma must be > 0");

  double lo = std::max(sim.x.front(), exp.x.front());
  double hi = std::min(sim.x.back(), exp.x.back());
  if (bandLo) lo = std::max(lo, *bandLo);
  if (bandHi) hi = std::min(hi, *bandHi);

  auto mean_step = [](const Series& s) {
    return s.x.size() < 2 ? 0.0 : (s.x.back() - s.x.front()) / static_cast<double>(s.x.size() - 1);
  };
  const Series& coarse = mean_step(sim) >= mean_step(exp) ? sim : exp;

  ComparisonReport report;
  report.sigma = sigma;
  for (double x : coarse.x) {
    if (x < lo || x > hi) continue;
    report.grid.push_back(x);
    report.residuals.push_back(interpolate(exp.x, exp.y, x) - interpolate(sim.x, sim.y, x));
  }
  if (report.grid.empty()) throw Error(ErrorKind::NoOverlap, "inputs share no grid points");

  std::size_t inside = 0;
  for (double r : report.residuals)
    if (std::abs(r) <= 2.0 * sigma) ++inside;
  report.fractionWithin2Sigma =
      static_cast<double>(inside) / static_cast<double>(report.residuals.size());

  auto peak = [](const Series& s, double& x, double& y) {
    const auto it = std::max_element(s.y.begin(), s.y.end());
    x = s.x[static_cast<std::size_t>(it - s.y.begin())];
    y = *it;
  };
  peak(sim, report.simPeakX, report.simPeakValue);
  peak(exp, report.expPeakX, report.expPeakValue);
  return report;
}

}  // namespace vacuumcone
