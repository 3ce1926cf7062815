#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <vector>

namespace vacuumcone {

/// Real refractive index n(omega) of the THz band, interpolated by a natural
/// cubic spline through tabulated samples. Immutable and cheap to copy.
class DispersionModel {
 public:
  /// Samples need not be sorted; exact duplicate rows are dropped. Throws
  /// TooFewSamples (< 4 distinct frequencies), NonPhysicalIndex (n < 1) or
  /// ParseError (same frequency listed with two indices).
  static DispersionModel from_samples(std::span<const double> omega, std::span<const double> n);

  /// Synthetic nondispersive medium on [omega_min, omega_max].
  static DispersionModel constant(double n, double omega_min, double omega_max);

  double refractive_index(double omega) const;
  /// n + omega dn/domega, derivative taken from the spline itself.
  double group_index(double omega) const;
  /// In-medium light-cone speed c / n(omega).
  double cone_speed(double omega) const;

  double omega_min() const { return omega_.front(); }
  double omega_max() const { return omega_.back(); }
  bool contains(double omega) const;

  const std::vector<double>& sample_omega() const { return omega_; }
  const std::vector<double>& sample_index() const { return index_; }

 private:
  struct Spline;
  DispersionModel(std::vector<double> omega, std::vector<double> index);
  double clamp_checked(double omega) const;

  std::vector<double> omega_;
  std::vector<double> index_;
  std::shared_ptr<const Spline> spline_;
};

/// Reads the `freq_THz,n` CSV format.
DispersionModel load_dispersion(const std::filesystem::path& path);

}  // namespace vacuumcone
