#include "vacuumcone/vacuum_field.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace vacuumcone {

namespace {

constexpr double kSeriesThreshold = 1e-3;
constexpr double kPi = std::numbers::pi;

// 2 hbar mu0 / pi
double field_prefactor() { return 2.0 * kConstants.hbar * kConstants.mu0 / kPi; }

}  // namespace

double green_tensor_im_xx_series(const Vec3& dr, double omega, double n) {
  const double k = n * omega / kConstants.c;
  const double u2 = k * k * (dr.x * dr.x + dr.y * dr.y + dr.z * dr.z);
  const double kx2 = k * k * dr.x * dr.x;  // (dx/rho)^2 u^2, regular at rho = 0
  const double isotropic = 2.0 / 3.0 - u2 * (2.0 / 15.0 - u2 * (1.0 / 140.0 - u2 / 5670.0));
  const double projector = kx2 * (1.0 / 15.0 - u2 * (1.0 / 210.0 - u2 / 7560.0));
  return k / (4.0 * kPi) * (isotropic + projector);
}

double green_tensor_im_xx_closed(const Vec3& dr, double omega, double n) {
  const double k = n * omega / kConstants.c;
  const double rho = dr.norm();
  const double u = k * rho;
  const double cx = (dr.x / rho) * (dr.x / rho);
  // Im{ e^{iu}/(4 pi rho) [ (1 + i/u - 1/u^2) + (-1 - 3i/u + 3/u^2) cx ] }
  const double re = 1.0 - 1.0 / (u * u) + cx * (-1.0 + 3.0 / (u * u));
  const double im = 1.0 / u - 3.0 * cx / u;
  return (std::sin(u) * re + std::cos(u) * im) / (4.0 * kPi * rho);
}

double green_tensor_im_xx(const Vec3& dr, double omega, double n) {
  const double u = n * omega / kConstants.c * dr.norm();
  if (u < kSeriesThreshold) return green_tensor_im_xx_series(dr, omega, n);
  return green_tensor_im_xx_closed(dr, omega, n);
}

double thermal_factor(double omega, double temperature) {
  if (temperature <= 0.0) return 1.0;
  const double x = kConstants.hbar * omega / (2.0 * kConstants.kB * temperature);
  if (x > 20.0) return 1.0 + 2.0 * std::exp(-2.0 * x);
  return 1.0 / std::tanh(x);
}

VacuumCorrelator::VacuumCorrelator(DispersionModel dispersion, double temperature)
    : dispersion_(std::move(dispersion)), temperature_(temperature) {}

double VacuumCorrelator::spectral_prefactor(double omega) const {
  return field_prefactor() * omega * omega * thermal_factor(omega, temperature_);
}

double VacuumCorrelator::anticommutator(const Vec3& dr, double dt, double omega) const {
  const double n = dispersion_.refractive_index(omega);
  return spectral_prefactor(omega) * green_tensor_im_xx(dr, omega, n) * std::cos(omega * dt);
}

double VacuumCorrelator::commutator_kernel(const Vec3& dr, double dt, double omega) const {
  const double n = dispersion_.refractive_index(omega);
  return field_prefactor() * omega * omega * green_tensor_im_xx(dr, omega, n) *
         std::sin(omega * dt);
}

double SignedLog::value() const { return sign == 0 ? 0.0 : sign * std::exp(logAbs); }

SignedLog band_limited_commutator(const Vec3& dr, double dt, double n, double cutoff) {
  // Every term reduces to Gaussian integrals of the form
  // int_0^inf cos(a w) w^m exp(-w^2/wc^2) dw, which are exp(-a^2 wc^2/4)
  // times a polynomial in a. a = dt -+ rho n / c.
  const double wc = cutoff;
  const double wc2 = wc * wc;
  const double a0 = std::sqrt(kPi) * wc / 2.0;
  const double a1 = std::sqrt(kPi) * wc * wc2 / 4.0;
  const double rho = dr.norm();

  double log_scale = 0.0;
  double sum = 0.0;
  if (rho == 0.0) {
    // Im G is n w / (6 pi c): int w^3 sin(w t) g dw = a1 t wc^2 (3/2 - t^2 wc^2 / 4) E(t).
    log_scale = std::log(field_prefactor() * n / (6.0 * kPi * kConstants.c)) - dt * dt * wc2 / 4.0;
    sum = a1 * dt * wc2 * (1.5 - dt * dt * wc2 / 4.0);
  } else {
    const double s = rho * n / kConstants.c;
    const double cx = (dr.x / rho) * (dr.x / rho);
    const double am = dt - s;
    const double ap = dt + s;
    const double bm = 0.5 * ((1.0 - cx) * a1 * (1.0 - am * am * wc2 / 2.0) / s +
                             (3.0 * cx - 1.0) * a0 / (s * s * s) +
                             (1.0 - 3.0 * cx) * a1 * am / (s * s));
    const double bp = 0.5 * (-(1.0 - cx) * a1 * (1.0 - ap * ap * wc2 / 2.0) / s -
                             (3.0 * cx - 1.0) * a0 / (s * s * s) +
                             (1.0 - 3.0 * cx) * a1 * ap / (s * s));
    const double lm = -am * am * wc2 / 4.0;
    const double lp = -ap * ap * wc2 / 4.0;
    const double top = std::max(lm, lp);
    sum = bm * std::exp(lm - top) + bp * std::exp(lp - top);
    log_scale = top + std::log(field_prefactor() * n / (4.0 * kPi * kConstants.c));
  }
  if (sum == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
  return {log_scale + std::log(std::abs(sum)), sum > 0.0 ? 1 : -1};
}

}  // namespace vacuumcone
