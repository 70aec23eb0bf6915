#pragma once

// Configuration-independent constants of a quasi-helically notched tube.
//
// All lengths are millimeters and all angles radians. The tendon's
// cross-section area and modulus keep the units they are usually quoted in
// (m^2 and GPa); kinematics converts them where the elongation is computed.

#include <string>
#include <vector>

#include "exonav/types.hpp"

namespace exonav {

struct TubeSpec {
  double inner_radius = 0.0;                 // R_in
  double outer_radius = 0.0;                 // R_out
  double notch_axial_width = 0.0;            // w
  double notch_circumferential_extent = 0.0; // h, arc length at R_out
  double bridge_length = 0.0;                // d
  double circumferential_offset = 0.0;       // a
  double patterned_length = 0.0;             // l
  double psi_max = 0.0;                      // half angle of remaining wall
  int turn_count = 1;                        // n
  double tendon_radius = 0.0;                // r_t

  /// Throws ValidationError naming the first offending field.
  void validate() const;

  /// The as-machined prototype: 0.851/0.953 mm nitinol, 64 mm patterned.
  static TubeSpec reference_prototype();
};

struct TendonSpec {
  double total_length = 0.0;       // mm
  double cross_section_area = 0.0; // m^2
  double elastic_modulus = 0.0;    // GPa

  void validate() const;

  static TendonSpec reference_prototype();
};

struct DerivedGeometry {
  double notch_na_offset = 0.0;     // y_na of a notched section
  double composite_na_offset = 0.0; // y_na averaged over notch + bridge
  double na_length = 0.0;           // l_na
  double tendon_na_distance = 0.0;  // d_t-na
  double slack_tendon_length = 0.0; // l_t0
  double patterned_length = 0.0;    // l, carried for rest-state checks
  int turn_count = 1;
};

/// Centroid offset of the wall sector psi in [-psi_max, psi_max],
/// r in [inner, outer], measured from the tube axis toward the sector.
/// Accepts 0 <= inner < outer and psi_max in (0, pi].
double notch_neutral_axis_offset(double inner_radius, double outer_radius,
                                 double psi_max);
double notch_neutral_axis_offset(const TubeSpec& spec);

/// Length-weighted average of the notch offset and a zero bridge offset.
double composite_neutral_axis_offset(double notch_offset, double notch_width,
                                     double bridge_length);

/// Arc length of a helix of radius `offset` with `turns` turns over `length`.
double neutral_axis_length(double length, double offset, int turns);

double tendon_neutral_axis_distance(double composite_offset,
                                    double inner_radius, double tendon_radius);

/// Tendon length at which zero stroke and zero tension give the straight
/// (unactuated) tube, i.e. R = y_na and H = l.
double slack_tendon_length(double length, double inner_radius,
                           double tendon_radius, int turns);

DerivedGeometry derive_geometry(const TubeSpec& spec);

struct PatternReport {
  double notch_count = 0.0;
  double closure_ratio = 0.0;        // circumferential turns actually machined
  double half_angle_residual = 0.0;  // rad
  bool notch_count_fractional = false;
  bool closure_mismatch = false;
  bool half_angle_mismatch = false;

  [[nodiscard]] bool consistent() const noexcept {
    return !notch_count_fractional && !closure_mismatch && !half_angle_mismatch;
  }
  [[nodiscard]] std::vector<std::string> warnings() const;
};

// Flag thresholds: 2% closure deviation from n, 1 degree half-angle residual.
inline constexpr double kClosureTolerance = 0.02;
inline constexpr double kHalfAngleTolerance = deg_to_rad(1.0);

PatternReport pattern_consistency(const TubeSpec& spec);

}  // namespace exonav
