#pragma once

#include <cmath>
#include <numbers>

namespace vacuumcone {

/// CODATA 2018 values in SI units. eps0 is derived from mu0 and c so that
/// c^2 eps0 mu0 = 1 holds to rounding.
struct PhysicalConstants {
  double hbar;
  double c;
  double eps0;
  double mu0;
  double kB;
};

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kMu0 = 1.25663706212e-6;

inline constexpr PhysicalConstants kConstants{
    1.054571817e-34,
    kSpeedOfLight,
    1.0 / (kMu0 * kSpeedOfLight * kSpeedOfLight),
    kMu0,
    1.380649e-23,
};

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Frequencies are angular (rad/s) internally and THz on every I/O surface.
constexpr double thz_to_rad_per_s(double thz) { return kTwoPi * 1e12 * thz; }
constexpr double rad_per_s_to_thz(double omega) { return omega / (kTwoPi * 1e12); }

constexpr double fs_to_s(double fs) { return fs * 1e-15; }
constexpr double s_to_fs(double s) { return s * 1e15; }
constexpr double um_to_m(double um) { return um * 1e-6; }
constexpr double m_to_um(double m) { return m * 1e6; }
constexpr double mm_to_m(double mm) { return mm * 1e-3; }
constexpr double m_to_mm(double m) { return m * 1e3; }

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  Vec3 operator-() const { return {-x, -y, -z}; }
};

}  // namespace vacuumcone
