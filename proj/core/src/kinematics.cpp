#include "exonav/kinematics.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "exonav/errors.hpp"

namespace exonav {
namespace {

constexpr double kPascalPerGigapascal = 1e9;
constexpr double kMillimetersPerMeter = 1e3;

void require_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    std::ostringstream os;
    os << "progression factor eta must lie in [0, 1] (got " << eta << ")";
    throw std::out_of_range(os.str());
  }
}

}  // namespace

double tendon_elongation(double tension, const TendonSpec& tendon) {
  const double total_m = tendon.total_length / kMillimetersPerMeter;
  const double stiffness = tendon.cross_section_area *
                           tendon.elastic_modulus * kPascalPerGigapascal;
  return tension * total_m / stiffness * kMillimetersPerMeter;
}

double tendon_length_from_stroke(double stroke, double tension,
                                 const TendonSpec& tendon,
                                 const DerivedGeometry& geom) {
  if (!(stroke >= 0.0) || !(tension >= 0.0)) {
    throw ValidationError("tendon stroke and tension must be non-negative");
  }
  const double length =
      geom.slack_tendon_length - stroke + tendon_elongation(tension, tendon);
  const double upper =
      geom.na_length + kTwoPi * geom.turn_count * geom.tendon_na_distance;
  if (!(length > 0.0) || !(length < upper)) {
    std::ostringstream os;
    os << "tendon length " << length << " mm outside (0, " << upper << ")";
    throw DomainError(DomainError::Reason::non_physical, os.str());
  }
  return length;
}

CylinderDims cylinder_from_tendon_length(double tendon_length,
                                         const DerivedGeometry& geom) {
  const double n = geom.turn_count;
  const double d = geom.tendon_na_distance;
  const double l_na = geom.na_length;
  const double radius =
      (l_na * l_na - tendon_length * tendon_length) /
          (8.0 * kPi * kPi * n * n * d) +
      d / 2.0;
  if (!(radius > 0.0)) {
    std::ostringstream os;
    os << "non-physical cylinder radius " << radius << " mm for tendon length "
       << tendon_length << " mm";
    throw DomainError(DomainError::Reason::non_physical, os.str());
  }
  const double lateral = kTwoPi * n * (radius - d);
  const double height_sq = tendon_length * tendon_length - lateral * lateral;
  if (!(height_sq > 0.0)) {
    std::ostringstream os;
    os << "over-actuated: tendon length " << tendon_length
       << " mm admits no real cylinder height";
    throw DomainError(DomainError::Reason::over_actuated, os.str());
  }
  return {radius, std::sqrt(height_sq)};
}

double tendon_length_from_cylinder(double radius, double height,
                                   const DerivedGeometry& geom) {
  return std::hypot(height,
                    kTwoPi * geom.turn_count * (radius - geom.tendon_na_distance));
}

double deflection_angle(double radius, double height, double na_offset,
                        int turns) {
  if (!(height > 0.0)) {
    throw DomainError(DomainError::Reason::invalid_input,
                      "deflection angle needs a positive cylinder height");
  }
  return std::atan2(kTwoPi * turns * (radius - na_offset), height);
}

JointState joint_from_cylinder(const CylinderDims& cylinder,
                               const DerivedGeometry& geom, double theta) {
  return JointState{
      cylinder.radius, cylinder.height,
      deflection_angle(cylinder.radius, cylinder.height,
                       geom.composite_na_offset, geom.turn_count),
      theta};
}

JointState joint_from_stroke(double stroke, double tension,
                             const TendonSpec& tendon,
                             const DerivedGeometry& geom, double theta) {
  const double length = tendon_length_from_stroke(stroke, tension, tendon, geom);
  return joint_from_cylinder(cylinder_from_tendon_length(length, geom), geom,
                             theta);
}

double closure_residual(const JointState& joint, const DerivedGeometry& geom) {
  const double length = std::hypot(
      joint.cylinder_height, kTwoPi * geom.turn_count * joint.cylinder_radius);
  return std::abs(length - geom.na_length) / geom.na_length;
}

Point3 helix_point(double s, double radius, double height, double na_length,
                   int turns) {
  if (!(s >= 0.0 && s <= na_length)) {
    std::ostringstream os;
    os << "arc length " << s << " mm outside [0, " << na_length << "]";
    throw std::out_of_range(os.str());
  }
  const double angle = kTwoPi * turns * s / na_length;
  return {s * height / na_length, -radius * std::cos(angle),
          radius * std::sin(angle)};
}

Point3 to_frame1(const Point3& p_c, double radius, double phi) {
  Eigen::Matrix3d rot;
  rot << std::cos(phi), 0.0, -std::sin(phi),
         0.0,           1.0, 0.0,
         std::sin(phi), 0.0, std::cos(phi);
  return rot * (p_c + radius * Vector3::UnitY());
}

Point3 to_frame0(const Point3& p_1, double theta) {
  return Eigen::AngleAxisd(theta, Vector3::UnitX()) * p_1;
}

Point3 backbone_point(const JointState& joint, const DerivedGeometry& geom,
                      double s) {
  const Point3 p_c = helix_point(s, joint.cylinder_radius, joint.cylinder_height,
                                 geom.na_length, geom.turn_count);
  return to_frame0(to_frame1(p_c, joint.cylinder_radius, joint.deflection_angle),
                   joint.actuation_angle);
}

BackboneCurve forward_kinematics(const JointState& joint,
                                 const DerivedGeometry& geom,
                                 std::span<const double> samples) {
  BackboneCurve curve;
  curve.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i > 0 && !(samples[i] > samples[i - 1])) {
      throw ValidationError("backbone samples must be strictly increasing");
    }
    curve.push_back({samples[i], backbone_point(joint, geom, samples[i])});
  }
  return curve;
}

std::vector<double> uniform_grid(double length, std::size_t count) {
  if (count < 2) {
    throw ValidationError("a uniform grid needs at least two samples");
  }
  std::vector<double> grid(count);
  const double last = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = length * static_cast<double>(i) / last;
  }
  grid.back() = length;
  return grid;
}

ActuationState ftl_actuation(double eta, const JointState& joint,
                             const DerivedGeometry& geom) {
  require_eta(eta);
  const double tendon_length = tendon_length_from_cylinder(
      joint.cylinder_radius, joint.cylinder_height, geom);
  ActuationState state;
  state.tendon_stroke = geom.slack_tendon_length - tendon_length;
  state.tendon_tension = 0.0;
  state.progression = eta;
  state.roller_input_angle = kTwoPi * eta * geom.turn_count;
  state.exposed_length = eta * geom.na_length;
  state.progressive_tendon_length = eta * tendon_length;
  return state;
}

Point3 ftl_tip(double eta, const JointState& joint, const DerivedGeometry& geom) {
  require_eta(eta);
  return backbone_point(joint, geom, eta * geom.na_length);
}

Line3 cylinder_axis(const JointState& joint) {
  const Point3 base = to_frame0(
      to_frame1(Point3::Zero(), joint.cylinder_radius, joint.deflection_angle),
      joint.actuation_angle);
  const Vector3 dir = to_frame0(
      to_frame1(Vector3::UnitX(), 0.0, joint.deflection_angle),
      joint.actuation_angle);
  return {base, dir.normalized()};
}

}  // namespace exonav
