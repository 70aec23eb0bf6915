#pragma once

#include <Eigen/Dense>
#include <numbers>
#include <vector>

namespace exonav {

/// Cartesian point in millimeters. The frame (O_c, O_1 or O_0) is fixed by the
/// function that produced it.
using Point3 = Eigen::Vector3d;
using Vector3 = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg_to_rad(double deg) noexcept { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) noexcept { return rad * 180.0 / kPi; }

/// One sample of a backbone curve, indexed by neutral-axis arc length (mm).
struct CurveSample {
  double s = 0.0;
  Point3 point = Point3::Zero();
};
using BackboneCurve = std::vector<CurveSample>;

/// One sample of a tip trace, indexed by progression factor eta in [0, 1].
struct TrajectorySample {
  double eta = 0.0;
  Point3 point = Point3::Zero();
};
using TipTrajectory = std::vector<TrajectorySample>;

}  // namespace exonav
