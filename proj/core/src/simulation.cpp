#include "exonav/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "exonav/errors.hpp"

namespace exonav {
namespace {

// One engine per sample so that any partition of the sweep reproduces the
// same draws.
std::mt19937_64 sample_engine(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(index) >> 32)};
  return std::mt19937_64(seq);
}

void require_monotone_grid(std::span<const double> grid) {
  if (grid.empty()) {
    throw ValidationError("eta grid must not be empty");
  }
  for (double eta : grid) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
      std::ostringstream os;
      os << "eta grid value " << eta << " outside [0, 1]";
      throw std::out_of_range(os.str());
    }
  }
  if (grid.size() < 2) return;
  const bool advancing = grid[1] > grid[0];
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const bool ok = advancing ? grid[i] > grid[i - 1] : grid[i] < grid[i - 1];
    if (!ok) {
      throw ValidationError("eta grid must be strictly monotone");
    }
  }
}

}  // namespace

void NoiseSpec::validate() const {
  if (!(position_sigma >= 0.0) || !(stroke_sigma >= 0.0)) {
    throw ValidationError("noise sigmas must be non-negative");
  }
}

std::vector<double> reference_marker_arclengths() {
  return {18.24, 33.20, 48.05, 63.61};
}

SyntheticDataset synthetic_sweep(const TubeSpec& tube, const TendonSpec& tendon,
                                 std::span<const ActuationSample> profile,
                                 std::span<const double> marker_arclengths,
                                 const NoiseSpec& noise, double theta) {
  noise.validate();
  tendon.validate();
  const DerivedGeometry geom = derive_geometry(tube);
  for (double s : marker_arclengths) {
    if (!(s >= 0.0 && s <= geom.na_length)) {
      std::ostringstream os;
      os << "marker arc length " << s << " mm outside [0, " << geom.na_length << "]";
      throw std::out_of_range(os.str());
    }
  }

  SyntheticDataset data;
  data.tube = tube;
  data.tendon = tendon;
  data.noise = noise;
  data.theta = theta;
  data.commanded.assign(profile.begin(), profile.end());
  for (double s : marker_arclengths) {
    data.markers.push_back(MarkerTrack{s, {}, {}});
  }

  for (std::size_t i = 0; i < profile.size(); ++i) {
    JointState joint;
    try {
      joint = joint_from_stroke(profile[i].stroke, profile[i].tension, tendon,
                                geom, theta);
    } catch (const std::exception& e) {
      data.failures.push_back({i, e.what()});
      continue;
    }
    auto engine = sample_engine(noise.seed, i);
    std::normal_distribution<double> unit(0.0, 1.0);
    auto perturb = [&](const Point3& p) {
      const Vector3 z(unit(engine), unit(engine), unit(engine));
      return Point3(p + noise.position_sigma * z);
    };

    data.sample_index.push_back(i);
    data.joints.push_back(joint);
    data.measured.push_back(
        {profile[i].stroke + noise.stroke_sigma * unit(engine), profile[i].tension});
    const Point3 tip = backbone_point(joint, geom, geom.na_length);
    data.tip_truth.push_back(tip);
    data.tip_measured.push_back(perturb(tip));
    for (auto& track : data.markers) {
      const Point3 p = backbone_point(joint, geom, track.arc_length);
      track.truth.push_back(p);
      track.measured.push_back(perturb(p));
    }
  }
  return data;
}

std::vector<ActuationSample> linear_stroke_profile(double first, double last,
                                                   std::size_t count) {
  std::vector<ActuationSample> profile;
  if (count == 0) return profile;
  if (count == 1) return {{first, 0.0}};
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    profile.push_back({first + t * (last - first), 0.0});
  }
  return profile;
}

std::vector<TrajectoryComparison> score_estimate(const SyntheticDataset& data,
                                                 const EstimateResult& estimate,
                                                 const DerivedGeometry& geom,
                                                 bool against_truth) {
  // estimate.sample_index refers to positions in the dataset's sample list.
  std::vector<TrajectoryComparison> out;
  for (const auto& track : data.markers) {
    std::vector<Point3> predicted;
    std::vector<Point3> reference;
    for (std::size_t k = 0; k < estimate.joint_series.size(); ++k) {
      const std::size_t row = estimate.sample_index[k];
      if (row >= track.truth.size()) continue;
      predicted.push_back(
          backbone_point(estimate.joint_series[k], geom,
                         std::min(track.arc_length, geom.na_length)));
      reference.push_back(against_truth ? track.truth[row] : track.measured[row]);
    }
    if (predicted.empty()) {
      throw ValidationError("estimate shares no samples with the dataset");
    }
    out.push_back(compare_points(predicted, reference));
  }
  return out;
}

FtlRun ftl_run(const JointState& joint, const DerivedGeometry& geom,
               std::span<const double> eta_grid) {
  require_monotone_grid(eta_grid);
  std::vector<double> ascending(eta_grid.begin(), eta_grid.end());
  std::sort(ascending.begin(), ascending.end());

  std::vector<CurveSample> full;
  full.reserve(ascending.size());
  for (double eta : ascending) {
    const double s = eta * geom.na_length;
    full.push_back({s, backbone_point(joint, geom, s)});
  }

  FtlRun run;
  run.tip.reserve(eta_grid.size());
  run.exposed.reserve(eta_grid.size());
  for (double eta : eta_grid) {
    run.tip.push_back({eta, ftl_tip(eta, joint, geom)});
    const auto end = std::upper_bound(ascending.begin(), ascending.end(), eta);
    const auto count = static_cast<std::size_t>(end - ascending.begin());
    run.exposed.emplace_back(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(count));
  }
  return run;
}

TrajectoryComparison ftl_fidelity(const TipTrajectory& tip,
                                  const BackboneCurve& final_backbone,
                                  double na_length) {
  if (tip.size() != final_backbone.size()) {
    throw ValidationError("tip trace and backbone have different grid sizes");
  }
  TipTrajectory sorted(tip.begin(), tip.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.eta < b.eta; });
  std::vector<Point3> a;
  std::vector<Point3> b;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (std::abs(sorted[i].eta * na_length - final_backbone[i].s) >
        1e-9 * na_length) {
      std::ostringstream os;
      os << "grid mismatch at index " << i << ": eta " << sorted[i].eta
         << " vs s " << final_backbone[i].s << " mm";
      throw ValidationError(os.str());
    }
    a.push_back(sorted[i].point);
    b.push_back(final_backbone[i].point);
  }
  return compare_points(a, b);
}

TipTrajectory ftl_tip_with_theta_drift(const JointState& joint,
                                       const DerivedGeometry& geom,
                                       std::span<const double> eta_grid,
                                       double drift) {
  require_monotone_grid(eta_grid);
  TipTrajectory out;
  out.reserve(eta_grid.size());
  for (double eta : eta_grid) {
    JointState drifted = joint;
    drifted.actuation_angle += drift * eta;
    out.push_back({eta, ftl_tip(eta, drifted, geom)});
  }
  return out;
}

void PhantomSpec::validate() const {
  if (std::abs(axis_direction.norm() - 1.0) > 1e-9) {
    throw ValidationError("phantom axis_direction must be a unit vector");
  }
  if (!(radius >= 0.0)) {
    throw ValidationError("phantom radius must be non-negative");
  }
}

PhantomSpec phantom_on_cylinder_axis(const JointState& joint, double radius) {
  const Line3 axis = cylinder_axis(joint);
  return PhantomSpec{axis.point, axis.direction, radius};
}

ClearanceResult phantom_clearance(const BackboneCurve& curve,
                                  const PhantomSpec& phantom,
                                  double tube_outer_radius) {
  phantom.validate();
  if (curve.empty()) {
    throw ValidationError("clearance needs a non-empty curve");
  }
  ClearanceResult result;
  result.min_clearance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const Vector3 rel = curve[i].point - phantom.axis_point;
    const double to_axis = rel.cross(phantom.axis_direction).norm();
    const double clearance = to_axis - phantom.radius - tube_outer_radius;
    if (clearance < result.min_clearance) {
      result.min_clearance = clearance;
      result.closest_index = i;
    }
  }
  result.collides = result.min_clearance < 0.0;
  return result;
}

}  // namespace exonav
