#pragma once

// Synthetic experiments, follow-the-leader runs and phantom clearance.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "exonav/estimation.hpp"
#include "exonav/geometry.hpp"
#include "exonav/kinematics.hpp"
#include "exonav/types.hpp"

namespace exonav {

struct NoiseSpec {
  double position_sigma = 0.0;  // mm, i.i.d. per axis
  double stroke_sigma = 0.0;    // mm
  std::uint64_t seed = 0;

  void validate() const;
};

/// Marker arc lengths (mm) of the shape experiment's four markers.
std::vector<double> reference_marker_arclengths();

struct MarkerTrack {
  double arc_length = 0.0;
  std::vector<Point3> truth;
  std::vector<Point3> measured;
};

/// Forward-model dataset. Every per-sample vector except `commanded` is
/// parallel to `sample_index`; samples the model rejected are in `failures`.
struct SyntheticDataset {
  TubeSpec tube;
  TendonSpec tendon;
  NoiseSpec noise;
  double theta = 0.0;
  std::vector<ActuationSample> commanded;
  std::vector<std::size_t> sample_index;
  std::vector<ActuationSample> measured;  // stroke log with stroke noise
  std::vector<JointState> joints;         // ground truth
  std::vector<Point3> tip_truth;
  std::vector<Point3> tip_measured;
  std::vector<MarkerTrack> markers;
  std::vector<SampleFailure> failures;
};

SyntheticDataset synthetic_sweep(const TubeSpec& tube, const TendonSpec& tendon,
                                 std::span<const ActuationSample> profile,
                                 std::span<const double> marker_arclengths,
                                 const NoiseSpec& noise, double theta);

/// Evenly spaced zero-tension strokes from `first` to `last` inclusive.
std::vector<ActuationSample> linear_stroke_profile(double first, double last,
                                                   std::size_t count);

/// Predicted marker positions from an estimate, scored per marker against
/// the dataset's ground truth (or measured) tracks over the samples both share.
std::vector<TrajectoryComparison> score_estimate(const SyntheticDataset& data,
                                                 const EstimateResult& estimate,
                                                 const DerivedGeometry& geom,
                                                 bool against_truth = true);

inline constexpr std::size_t kDefaultEtaSteps = 101;

struct FtlRun {
  TipTrajectory tip;
  /// exposed[k] holds the backbone at the grid arc lengths eta_j * l_na with
  /// eta_j <= eta_k, ascending.
  std::vector<BackboneCurve> exposed;
};

/// Progression over a monotone eta grid (advancing or retracting) under a
/// constant joint state.
FtlRun ftl_run(const JointState& joint, const DerivedGeometry& geom,
               std::span<const double> eta_grid);

/// Distance between a tip trace and the final backbone sampled at
/// s = eta * l_na. Zero for an ideal follow-the-leader run.
TrajectoryComparison ftl_fidelity(const TipTrajectory& tip,
                                  const BackboneCurve& final_backbone,
                                  double na_length);

/// Tip trace whose actuation angle drifts linearly: theta + drift * eta.
TipTrajectory ftl_tip_with_theta_drift(const JointState& joint,
                                       const DerivedGeometry& geom,
                                       std::span<const double> eta_grid,
                                       double drift);

struct PhantomSpec {
  Point3 axis_point = Point3::Zero();
  Vector3 axis_direction = Vector3::UnitX();
  double radius = 0.0;

  void validate() const;
};

/// Phantom whose axis coincides with the imaginary cylinder's axis.
PhantomSpec phantom_on_cylinder_axis(const JointState& joint, double radius);

struct ClearanceResult {
  double min_clearance = 0.0;  // mm, negative when penetrating
  bool collides = false;
  std::size_t closest_index = 0;
};

ClearanceResult phantom_clearance(const BackboneCurve& curve,
                                  const PhantomSpec& phantom,
                                  double tube_outer_radius);

}  // namespace exonav
