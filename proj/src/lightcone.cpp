#include "vacuumcone/lightcone.hpp"

#include <cmath>

namespace vacuumcone {

std::string_view to_string(Region region) {
  switch (region) {
    case Region::Total: return "total";
    case Region::Causal: return "causal";
    case Region::NonCausal: return "noncausal";
  }
  return "unknown";
}

double ConeClassifier::cone_radius(double dt, double omega) const {
  return kConstants.c * std::abs(dt) / dispersion_.refractive_index(omega);
}

double ConeClassifier::flight_time(const Vec3& dr, double omega) const {
  return dr.norm() * dispersion_.refractive_index(omega) / kConstants.c;
}

Cone ConeClassifier::classify(const Vec3& dr, double dt, double omega) const {
  return dr.norm() <= cone_radius(dt, omega) ? Cone::Causal : Cone::NonCausal;
}

double ConeClassifier::indicator_weight(Region region, const Vec3& dr, double dt,
                                        double omega) const {
  if (region == Region::Total) return 1.0;
  const Cone cone = classify(dr, dt, omega);
  const bool match = (region == Region::Causal) == (cone == Cone::Causal);
  return match ? 1.0 : 0.0;
}

}  // namespace vacuumcone
