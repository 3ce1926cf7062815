#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vacuumcone {

/// Correlation trace on a uniform delay grid. Delays in s, values in V^2/m^2.
struct TimeTrace {
  std::vector<double> delays;
  std::vector<double> values;
  std::vector<double> sigma;  // empty when no uncertainty is attached
  std::vector<std::string> history;

  double spacing() const;
  /// Throws NonUniformSpacing / InvalidArgument when the invariants fail.
  void check() const;
};

/// Spectrum on non-negative increasing frequencies. freqs in THz, values in
/// V^2/m^2 per THz.
struct Spectrum {
  std::vector<double> freqs;
  std::vector<double> values;
  std::vector<double> errors;  // empty when absent
};

struct Window {
  enum class Kind { Hann, Tukey } kind = Kind::Tukey;
  double alpha = 0.5;  // Tukey taper fraction; Hann is Tukey(1)

  static Window hann() { return {Kind::Hann, 1.0}; }
  static Window tukey(double alpha) { return {Kind::Tukey, alpha}; }
  std::string describe() const;
};

std::vector<double> window_weights(const Window& window, std::size_t length);

TimeTrace apodize(const TimeTrace& trace, const Window& window = {});

/// (2 pi)^-1 sum_j dt exp(i Omega t_j) G(t_j) on the FFT grid up to Nyquist,
/// real part only (transform of the even part about dt = 0). Needs >= 8 points.
Spectrum wiener_khinchin(const TimeTrace& trace);

/// Exact inverse of wiener_khinchin for traces that are even about dt = 0
/// on a grid symmetric about zero.
TimeTrace inverse_wiener_khinchin(const Spectrum& spectrum, std::span<const double> delays);

/// Zero-phase spectral mask: 1 below passThz, raised-cosine rolloff to 0 at
/// stopThz. DC gain 1.
TimeTrace lowpass(const TimeTrace& trace, double passThz, double stopThz);
TimeTrace lowpass_3thz(const TimeTrace& trace);

/// Amplitude envelope |analytic signal| via the FFT Hilbert transform.
std::vector<double> analytic_envelope(const TimeTrace& trace);

double peak_to_peak(std::span<const double> values);

/// Generic sampled curve for comparisons (x in fs or THz).
struct Series {
  std::vector<double> x;
  std::vector<double> y;
};

Series to_series(const TimeTrace& trace);  // x in fs
Series to_series(const Spectrum& spectrum);

struct ComparisonReport {
  std::vector<double> grid;
  std::vector<double> residuals;  // exp - sim on grid
  double sigma = 0.0;
  double fractionWithin2Sigma = 0.0;
  double simPeakX = 0.0;
  double simPeakValue = 0.0;
  double expPeakX = 0.0;
  double expPeakValue = 0.0;
};

/// Both series are interpolated linearly onto the coarser of the two grids,
/// restricted to their overlap and to [bandLo, bandHi] when given. Throws
/// NoOverlap if nothing remains.
ComparisonReport compare(const Series& sim, const Series& exp, double sigma,
                         std::optional<double> bandLo = std::nullopt,
                         std::optional<double> bandHi = std::nullopt);

}  // namespace vacuumcone
