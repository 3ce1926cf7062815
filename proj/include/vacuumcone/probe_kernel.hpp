#pragma once

#include <array>

#include "vacuumcone/config.hpp"
#include "vacuumcone/units.hpp"

namespace vacuumcone {

/// Space-time envelope of one probe pulse crossing the crystal along +y.
/// Gaussian in x, z (1/e^2 intensity radius `waist`) and in the co-moving
/// time t - delay - y n_g / c (intensity FWHM `pulseFwhm`), hard window
/// 0 <= y <= crystalLength.
struct ProbeKernel {
  double waist = 10e-6;
  double pulseFwhm = 195e-15;
  double groupIndex = 3.24;
  double crystalLength = 1e-3;
  double transverseOffset = 0.0;
  double delay = 0.0;

  /// Standard deviation of the intensity profile along x and z.
  double transverse_sigma() const { return 0.5 * waist; }
  /// Standard deviation of the intensity profile in time.
  double temporal_sigma() const;
};

/// Normalized so that its integral over all of space-time is 1.
double envelope(const ProbeKernel& probe, const Vec3& r, double t);

/// The two probes of one measurement. Both must share groupIndex and
/// crystalLength; probe two sits at +deltaRPerp and fires deltaT later.
struct PairKernel {
  ProbeKernel first;
  ProbeKernel second;

  static PairKernel from_config(const ExperimentConfig& cfg, double delay = 0.0);

  double delta_r_perp() const { return second.transverseOffset - first.transverseOffset; }
  double delay() const { return second.delay - first.delay; }
  PairKernel swapped() const { return {second, first}; }

  /// Per-axis standard deviation of the transverse lags.
  double lag_transverse_sigma() const;
  /// Standard deviation of the time lag at fixed longitudinal lag.
  double lag_temporal_sigma() const;
  double group_index() const { return first.groupIndex; }
  double crystal_length() const { return first.crystalLength; }
};

/// Cross-correlation K(dr, dt) = int dT d^3R L1(R - dr/2, T - dt/2) L2(R + dr/2, T + dt/2).
/// The mean-coordinate integral reduces to the overlap length (L - |dy|)/L^2
/// of the two crystal windows, so K is evaluated in closed form.
double pair_kernel(const PairKernel& pair, const Vec3& dr, double dt);

/// One exact draw from K: the spatial lag and the mean of the time lag,
/// whose conditional law is normal with sd lag_temporal_sigma().
struct LagDraw {
  Vec3 dr;
  double dtMean = 0.0;
};

/// Maps three uniforms in (0,1) to a draw from K's spatial marginal.
/// uy drives the triangular longitudinal lag, ux and uz the Gaussian
/// transverse lags, all via inverse CDFs.
LagDraw draw_lag(const PairKernel& pair, double uy, double ux, double uz);

/// Inverse CDF of the longitudinal lag, triangular on [-L, L].
double longitudinal_lag_quantile(double length, double u);

struct SupportBox {
  std::array<double, 2> x;
  std::array<double, 2> y;
  std::array<double, 2> z;
  std::array<double, 2> t;
};

/// Axis-aligned box in (dr, dt) holding at least `containment` of K's mass.
/// Throws InvalidContainment unless 0 < containment < 1.
SupportBox kernel_support(const PairKernel& pair, double containment);

/// Exact mass of K inside an axis-aligned box (1D quadrature over dy).
double kernel_mass(const PairKernel& pair, const SupportBox& box);

}  // namespace vacuumcone
