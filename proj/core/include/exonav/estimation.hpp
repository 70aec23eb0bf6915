#pragma once

// Joint-state estimation from tendon logs or tracked tip positions, and the
// trajectory error metrics used to score estimates against measurements.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "exonav/geometry.hpp"
#include "exonav/kinematics.hpp"
#include "exonav/types.hpp"

namespace exonav {

struct ActuationSample {
  double stroke = 0.0;   // mm
  double tension = 0.0;  // N
};

enum class EstimationMethod { stroke_based, position_based };

const char* to_string(EstimationMethod method) noexcept;

struct SampleFailure {
  std::size_t index = 0;
  std::string message;
};

/// Batch estimate. `joint_series`, `per_sample_phi` and `sample_index` are
/// parallel; samples that failed are listed in `failures` instead.
struct EstimateResult {
  EstimationMethod method = EstimationMethod::stroke_based;
  std::vector<JointState> joint_series;
  std::vector<double> per_sample_phi;
  std::vector<std::size_t> sample_index;
  std::vector<SampleFailure> failures;
};

EstimateResult stroke_based_estimate(std::span<const ActuationSample> series,
                                     const DerivedGeometry& geom,
                                     const TendonSpec& tendon, double theta);

struct PositionEstimate {
  double height = 0.0;     // |tip|
  double phi_truth = 0.0;  // angle between tip and +X_0
  double radius = 0.0;     // from the neutral-axis length closure
  double phi_model = 0.0;  // deflection-angle law applied to (R, H)
};

/// Throws DomainError(unreachable) when |tip| exceeds l_na or is zero.
PositionEstimate position_based_estimate(const Point3& tip,
                                         const DerivedGeometry& geom);

/// Batch form. Joint states carry the measured angle (phi_truth) so they
/// reproduce the tracked tip; `per_sample_phi` holds phi_model.
EstimateResult position_based_estimate(std::span<const Point3> tips,
                                       const DerivedGeometry& geom,
                                       double theta);

struct TrajectoryComparison {
  double max_euclidean = 0.0;  // mm
  double rmse = 0.0;           // mm
  std::vector<double> per_sample_distances;
};

double max_euclidean_distance(std::span<const Point3> a,
                              std::span<const Point3> b);
double rmse(std::span<const Point3> a, std::span<const Point3> b);
TrajectoryComparison compare_points(std::span<const Point3> a,
                                    std::span<const Point3> b);

struct RepeatabilityResult {
  std::vector<double> eta;  // grid the comparison was evaluated on
  TrajectoryComparison comparison;
};

/// Compares two trials over eta. When grids differ, the second trial is
/// linearly interpolated onto the first trial's eta values inside the overlap.
RepeatabilityResult repeatability_compare(const TipTrajectory& first,
                                          const TipTrajectory& second);

}  // namespace exonav
