#pragma once

// Actuation -> joint -> task space map of the helical inner tube.
//
// Frames: O_c sits at the centre of the imaginary cylinder's base with X_c on
// the cylinder axis; O_1 is at the outer-tube tip with Y_1 toward the notches;
// O_0 is the fixed frame at the same origin, X_0 out along the outer tube.

#include <cstddef>
#include <span>
#include <vector>

#include "exonav/geometry.hpp"
#include "exonav/types.hpp"

namespace exonav {

struct JointState {
  double cylinder_radius = 0.0;  // R
  double cylinder_height = 0.0;  // H
  double deflection_angle = 0.0; // phi
  double actuation_angle = 0.0;  // theta, always supplied, never inferred
};

struct CylinderDims {
  double radius = 0.0;
  double height = 0.0;
};

struct ActuationState {
  double tendon_stroke = 0.0;             // mm, zero-tension equivalent
  double tendon_tension = 0.0;            // N
  double progression = 0.0;               // eta
  double roller_input_angle = 0.0;        // rad
  double exposed_length = 0.0;            // mm of neutral axis outside the outer tube
  double progressive_tendon_length = 0.0; // mm
};

/// Tendon stretch in mm under tension T (N).
double tendon_elongation(double tension, const TendonSpec& tendon);

/// l_t = l_t0 - stroke + elongation. Rejects lengths with no real cylinder.
double tendon_length_from_stroke(double stroke, double tension,
                                 const TendonSpec& tendon,
                                 const DerivedGeometry& geom);

/// Solves the neutral-axis and tendon helix lengths for (R, H). R comes from
/// their difference; H from the tendon equation. Throws DomainError
/// (over_actuated / non_physical) when no real positive solution exists.
CylinderDims cylinder_from_tendon_length(double tendon_length,
                                         const DerivedGeometry& geom);

/// Tendon helix length for a given cylinder.
double tendon_length_from_cylinder(double radius, double height,
                                   const DerivedGeometry& geom);

double deflection_angle(double radius, double height, double na_offset,
                        int turns);

/// Stroke/tension -> full joint state, with a caller-supplied actuation angle.
JointState joint_from_stroke(double stroke, double tension,
                             const TendonSpec& tendon,
                             const DerivedGeometry& geom, double theta);

/// Joint state from cylinder dimensions, phi from the deflection-angle law.
JointState joint_from_cylinder(const CylinderDims& cylinder,
                               const DerivedGeometry& geom, double theta);

/// Relative residual of sqrt(H^2 + (2 pi n R)^2) against l_na.
double closure_residual(const JointState& joint, const DerivedGeometry& geom);

/// Neutral-axis point at arc length s in O_c. Throws std::out_of_range
/// outside [0, l_na].
Point3 helix_point(double s, double radius, double height, double na_length,
                   int turns);

Point3 to_frame1(const Point3& p_c, double radius, double phi);
Point3 to_frame0(const Point3& p_1, double theta);

Point3 backbone_point(const JointState& joint, const DerivedGeometry& geom,
                      double s);

/// Backbone at the given arc lengths (sorted, within [0, l_na]).
BackboneCurve forward_kinematics(const JointState& joint,
                                 const DerivedGeometry& geom,
                                 std::span<const double> samples);

inline constexpr std::size_t kDefaultBackboneSamples = 129;

/// `count` evenly spaced values over [0, length], both ends included.
std::vector<double> uniform_grid(double length,
                                 std::size_t count = kDefaultBackboneSamples);

/// Actuator set-points for progression eta under a fixed joint state.
ActuationState ftl_actuation(double eta, const JointState& joint,
                             const DerivedGeometry& geom);

/// Tip of the exposed portion during FTL progression: p_0(eta * l_na).
Point3 ftl_tip(double eta, const JointState& joint, const DerivedGeometry& geom);

struct Line3 {
  Point3 point = Point3::Zero();
  Vector3 direction = Vector3::UnitX();
};

/// Axis of the imaginary cylinder expressed in O_0.
Line3 cylinder_axis(const JointState& joint);

}  // namespace exonav
