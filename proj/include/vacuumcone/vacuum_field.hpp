#pragma once

#include "vacuumcone/dispersion.hpp"
#include "vacuumcone/units.hpp"

namespace vacuumcone {

/// Im G_xx(dr, omega) of the bulk homogeneous medium with k = n omega / c.
/// Below k|dr| = 1e-3 a Taylor series replaces the closed form; at dr = 0 it
/// returns the coincidence limit k / (6 pi). Units: 1/m.
double green_tensor_im_xx(const Vec3& dr, double omega, double n);

/// Series branch of green_tensor_im_xx, exposed for crossover checks.
double green_tensor_im_xx_series(const Vec3& dr, double omega, double n);
/// Closed-form branch of green_tensor_im_xx; singular at dr = 0.
double green_tensor_im_xx_closed(const Vec3& dr, double omega, double n);

/// coth(hbar omega / 2 kB T); exactly 1 at T = 0.
double thermal_factor(double omega, double temperature);

/// Per-frequency two-point functions of the x-polarized field.
class VacuumCorrelator {
 public:
  VacuumCorrelator(DispersionModel dispersion, double temperature);

  /// (2 hbar mu0 / pi) omega^2 coth(hbar omega / 2 kB T).
  double spectral_prefactor(double omega) const;

  /// C(dr, dt) such that <{E_x, E_x}>(dr, dt) = int_0^inf domega C. V^2/m^2 per rad/s.
  double anticommutator(const Vec3& dr, double dt, double omega) const;

  /// Same spectral weight with sin(omega dt) and no thermal factor.
  double commutator_kernel(const Vec3& dr, double dt, double omega) const;

  const DispersionModel& dispersion() const { return dispersion_; }
  double temperature() const { return temperature_; }

 private:
  DispersionModel dispersion_;
  double temperature_;
};

/// Signed value stored as sign * exp(logAbs); keeps Gaussian tails far
/// below the double range comparable.
struct SignedLog {
  double logAbs;
  int sign;

  double value() const;
};

/// int_0^inf domega exp(-omega^2/cutoff^2) * commutator kernel in a
/// nondispersive medium of index n, in closed form. Units: V^2/m^2.
SignedLog band_limited_commutator(const Vec3& dr, double dt, double n, double cutoff);

}  // namespace vacuumcone
