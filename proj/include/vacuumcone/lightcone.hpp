#pragma once

#include <string_view>

#include "vacuumcone/dispersion.hpp"
#include "vacuumcone/units.hpp"

namespace vacuumcone {

enum class Cone { Causal, NonCausal };

enum class Region { Total, Causal, NonCausal };

std::string_view to_string(Region region);

/// Per-mode light cone of the dispersive crystal: a lag (dr, dt) is causal
/// at frequency omega iff |dr| <= c |dt| / n(omega). The boundary is causal.
class ConeClassifier {
 public:
  explicit ConeClassifier(DispersionModel dispersion) : dispersion_(std::move(dispersion)) {}

  Cone classify(const Vec3& dr, double dt, double omega) const;
  /// Radius c |dt| / n(omega) of the cone at time lag dt.
  double cone_radius(double dt, double omega) const;
  /// Time n(omega) |dr| / c that light of this mode needs to cover dr.
  double flight_time(const Vec3& dr, double omega) const;
  /// Indicator of `region`; Region::Total is always 1.
  double indicator_weight(Region region, const Vec3& dr, double dt, double omega) const;

  const DispersionModel& dispersion() const { return dispersion_; }

 private:
  DispersionModel dispersion_;
};

}  // namespace vacuumcone
