#include "exonav/geometry.hpp"

#include <cmath>
#include <sstream>

#include "exonav/errors.hpp"

namespace exonav {
namespace {

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << field << " must be a positive finite length (got " << value << ")";
    throw ValidationError(os.str());
  }
}

void require_non_negative(double value, const char* field) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << field << " must be non-negative (got " << value << ")";
    throw ValidationError(os.str());
  }
}

}  // namespace

void TubeSpec::validate() const {
  require_positive(inner_radius, "inner_radius");
  require_positive(outer_radius, "outer_radius");
  if (inner_radius >= outer_radius) {
    throw ValidationError("inner_radius must be smaller than outer_radius");
  }
  require_positive(notch_axial_width, "notch_axial_width");
  require_positive(notch_circumferential_extent, "notch_circumferential_extent");
  require_non_negative(bridge_length, "bridge_length");
  require_non_negative(circumferential_offset, "circumferential_offset");
  require_positive(patterned_length, "patterned_length");
  if (!(psi_max > 0.0 && psi_max <= kPi)) {
    throw ValidationError("psi_max must lie in (0, 180] degrees");
  }
  if (turn_count < 1) {
    throw ValidationError("turn_count must be >= 1");
  }
  require_positive(tendon_radius, "tendon_radius");
  if (tendon_radius >= inner_radius) {
    throw ValidationError("tendon_radius must be smaller than inner_radius");
  }
}

TubeSpec TubeSpec::reference_prototype() {
  TubeSpec spec;
  spec.inner_radius = 0.851;
  spec.outer_radius = 0.953;
  spec.notch_axial_width = 0.5;
  spec.notch_circumferential_extent = 3.892;
  spec.bridge_length = 0.3;
  spec.circumferential_offset = 0.075;
  spec.patterned_length = 64.0;
  spec.psi_max = deg_to_rad(63.0);
  spec.turn_count = 1;
  spec.tendon_radius = 0.115;
  return spec;
}

void TendonSpec::validate() const {
  require_positive(total_length, "total_length");
  require_positive(cross_section_area, "cross_section_area");
  require_positive(elastic_modulus, "elastic_modulus");
}

TendonSpec TendonSpec::reference_prototype() {
  // The area is kept as published even though it does not match r_t.
  return TendonSpec{475.0, 1.135e-6, 53.97};
}

double notch_neutral_axis_offset(double inner_radius, double outer_radius,
                                 double psi_max) {
  if (!(inner_radius >= 0.0) || !(outer_radius > inner_radius)) {
    throw DomainError(DomainError::Reason::invalid_input,
                      "notch offset needs 0 <= inner_radius < outer_radius");
  }
  if (!(psi_max > 0.0 && psi_max <= kPi)) {
    throw DomainError(DomainError::Reason::invalid_input,
                      "notch offset needs psi_max in (0, pi]");
  }
  // First moment over area of the annular sector, both integrals in closed form.
  const double r_in2 = inner_radius * inner_radius;
  const double r_out2 = outer_radius * outer_radius;
  const double moment =
      2.0 * std::sin(psi_max) * (r_out2 * outer_radius - r_in2 * inner_radius) / 3.0;
  const double area = 2.0 * psi_max * (r_out2 - r_in2) / 2.0;
  const double offset = moment / area;
  // sin(pi) is ~1e-16, not zero.
  return psi_max == kPi ? 0.0 : offset;
}

double notch_neutral_axis_offset(const TubeSpec& spec) {
  return notch_neutral_axis_offset(spec.inner_radius, spec.outer_radius,
                                   spec.psi_max);
}

double composite_neutral_axis_offset(double notch_offset, double notch_width,
                                     double bridge_length) {
  if (!(notch_width > 0.0) || !(bridge_length >= 0.0)) {
    throw DomainError(DomainError::Reason::invalid_input,
                      "composite offset needs w > 0 and d >= 0");
  }
  constexpr double bridge_offset = 0.0;
  return (notch_width * notch_offset + bridge_length * bridge_offset) /
         (notch_width + bridge_length);
}

double neutral_axis_length(double length, double offset, int turns) {
  return std::hypot(length, kTwoPi * turns * offset);
}

double tendon_neutral_axis_distance(double composite_offset,
                                    double inner_radius, double tendon_radius) {
  const double distance = composite_offset + inner_radius - tendon_radius;
  if (!(distance > 0.0)) {
    throw DomainError(DomainError::Reason::invalid_input,
                      "tendon-to-neutral-axis distance must be positive");
  }
  return distance;
}

double slack_tendon_length(double length, double inner_radius,
                           double tendon_radius, int turns) {
  // At rest R = y_na, so R - d_t-na = -(R_in - r_t) independently of y_na.
  return std::hypot(length, kTwoPi * turns * (inner_radius - tendon_radius));
}

DerivedGeometry derive_geometry(const TubeSpec& spec) {
  spec.validate();
  DerivedGeometry g;
  g.notch_na_offset = notch_neutral_axis_offset(spec);
  g.composite_na_offset = composite_neutral_axis_offset(
      g.notch_na_offset, spec.notch_axial_width, spec.bridge_length);
  g.na_length = neutral_axis_length(spec.patterned_length,
                                    g.composite_na_offset, spec.turn_count);
  g.tendon_na_distance = tendon_neutral_axis_distance(
      g.composite_na_offset, spec.inner_radius, spec.tendon_radius);
  g.slack_tendon_length =
      slack_tendon_length(spec.patterned_length, spec.inner_radius,
                          spec.tendon_radius, spec.turn_count);
  g.patterned_length = spec.patterned_length;
  g.turn_count = spec.turn_count;
  return g;
}

PatternReport pattern_consistency(const TubeSpec& spec) {
  PatternReport report;
  const double pitch = spec.notch_axial_width + spec.bridge_length;
  report.notch_count = spec.patterned_length / pitch;
  report.closure_ratio = report.notch_count * spec.circumferential_offset /
                         (kTwoPi * spec.outer_radius);
  const double implied_half_angle =
      (kTwoPi - spec.notch_circumferential_extent / spec.outer_radius) / 2.0;
  report.half_angle_residual = std::abs(spec.psi_max - implied_half_angle);

  report.notch_count_fractional =
      std::abs(report.notch_count - std::round(report.notch_count)) > 1e-9;
  const double n = static_cast<double>(spec.turn_count);
  report.closure_mismatch =
      std::abs(report.closure_ratio - n) / n > kClosureTolerance;
  report.half_angle_mismatch = report.half_angle_residual > kHalfAngleTolerance;
  return report;
}

std::vector<std::string> PatternReport::warnings() const {
  std::vector<std::string> out;
  if (notch_count_fractional) {
    std::ostringstream os;
    os << "notch count " << notch_count << " is not an integer (w + d does not divide l)";
    out.push_back(os.str());
  }
  if (closure_mismatch) {
    std::ostringstream os;
    os << "circumferential closure ratio " << closure_ratio
       << " deviates from turn_count by more than 2%";
    out.push_back(os.str());
  }
  if (half_angle_mismatch) {
    std::ostringstream os;
    os << "psi_max differs from the half angle implied by h by "
       << rad_to_deg(half_angle_residual) << " deg";
    out.push_back(os.str());
  }
  return out;
}

}  // namespace exonav
