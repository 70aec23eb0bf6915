#include "exonav/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "exonav/errors.hpp"

namespace exonav {
namespace {

void require_aligned(std::span<const Point3> a, std::span<const Point3> b) {
  if (a.size() != b.size()) {
    std::ostringstream os;
    os << "point sequences differ in length (" << a.size() << " vs "
       << b.size() << ")";
    throw ValidationError(os.str());
  }
  if (a.empty()) {
    throw ValidationError("point sequences must not be empty");
  }
}

std::vector<TrajectorySample> sorted_by_eta(const TipTrajectory& trial) {
  std::vector<TrajectorySample> out(trial.begin(), trial.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.eta < b.eta; });
  return out;
}

Point3 interpolate(const std::vector<TrajectorySample>& trial, double eta) {
  auto upper = std::lower_bound(
      trial.begin(), trial.end(), eta,
      [](const TrajectorySample& s, double value) { return s.eta < value; });
  if (upper == trial.end()) return trial.back().point;
  if (upper->eta == eta || upper == trial.begin()) return upper->point;
  const auto lower = std::prev(upper);
  const double t = (eta - lower->eta) / (upper->eta - lower->eta);
  return lower->point + t * (upper->point - lower->point);
}

}  // namespace

const char* to_string(EstimationMethod method) noexcept {
  switch (method) {
    case EstimationMethod::stroke_based: return "stroke_based";
    case EstimationMethod::position_based: return "position_based";
  }
  return "unknown";
}

EstimateResult stroke_based_estimate(std::span<const ActuationSample> series,
                                     const DerivedGeometry& geom,
                                     const TendonSpec& tendon, double theta) {
  EstimateResult result;
  result.method = EstimationMethod::stroke_based;
  for (std::size_t i = 0; i < series.size(); ++i) {
    try {
      const JointState joint = joint_from_stroke(
          series[i].stroke, series[i].tension, tendon, geom, theta);
      result.joint_series.push_back(joint);
      result.per_sample_phi.push_back(joint.deflection_angle);
      result.sample_index.push_back(i);
    } catch (const std::exception& e) {
      result.failures.push_back({i, e.what()});
    }
  }
  return result;
}

PositionEstimate position_based_estimate(const Point3& tip,
                                         const DerivedGeometry& geom) {
  const double height = tip.norm();
  if (!(height > 0.0) || !std::isfinite(height)) {
    throw DomainError(DomainError::Reason::unreachable,
                      "tip position must be finite and away from the origin");
  }
  // Admit rounding noise on model-generated straight tips.
  if (height > geom.na_length * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "tip distance " << height << " mm exceeds the neutral-axis length "
       << geom.na_length << " mm";
    throw DomainError(DomainError::Reason::unreachable, os.str());
  }
  PositionEstimate est;
  est.height = height;
  // acos(x / |tip|), written in the form that stays accurate near zero.
  est.phi_truth = std::atan2(std::hypot(tip.y(), tip.z()), tip.x());
  const double lateral_sq =
      std::max(0.0, geom.na_length * geom.na_length - height * height);
  est.radius = std::sqrt(lateral_sq) / (kTwoPi * geom.turn_count);
  est.phi_model = std::atan2(
      kTwoPi * geom.turn_count * (est.radius - geom.composite_na_offset), height);
  return est;
}

EstimateResult position_based_estimate(std::span<const Point3> tips,
                                       const DerivedGeometry& geom,
                                       double theta) {
  EstimateResult result;
  result.method = EstimationMethod::position_based;
  for (std::size_t i = 0; i < tips.size(); ++i) {
    try {
      const PositionEstimate est = position_based_estimate(tips[i], geom);
      result.joint_series.push_back(
          JointState{est.radius, est.height, est.phi_truth, theta});
      result.per_sample_phi.push_back(est.phi_model);
      result.sample_index.push_back(i);
    } catch (const std::exception& e) {
      result.failures.push_back({i, e.what()});
    }
  }
  return result;
}

double max_euclidean_distance(std::span<const Point3> a,
                              std::span<const Point3> b) {
  require_aligned(a, b);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, (a[i] - b[i]).norm());
  }
  return worst;
}

double rmse(std::span<const Point3> a, std::span<const Point3> b) {
  require_aligned(a, b);
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum_sq += (a[i] - b[i]).squaredNorm();
  }
  return std::sqrt(sum_sq / static_cast<double>(a.size()));
}

TrajectoryComparison compare_points(std::span<const Point3> a,
                                    std::span<const Point3> b) {
  TrajectoryComparison out;
  out.max_euclidean = max_euclidean_distance(a, b);
  out.rmse = rmse(a, b);
  out.per_sample_distances.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.per_sample_distances.push_back((a[i] - b[i]).norm());
  }
  return out;
}

RepeatabilityResult repeatability_compare(const TipTrajectory& first,
                                          const TipTrajectory& second) {
  if (first.empty() || second.empty()) {
    throw ValidationError("trajectories must not be empty");
  }
  const auto a = sorted_by_eta(first);
  const auto b = sorted_by_eta(second);

  const bool same_grid =
      a.size() == b.size() &&
      std::equal(a.begin(), a.end(), b.begin(), [](const auto& x, const auto& y) {
        return std::abs(x.eta - y.eta) <= 1e-12;
      });

  RepeatabilityResult result;
  std::vector<Point3> pa;
  std::vector<Point3> pb;
  if (same_grid) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      result.eta.push_back(a[i].eta);
      pa.push_back(a[i].point);
      pb.push_back(b[i].point);
    }
  } else {
    const double lo = b.front().eta;
    const double hi = b.back().eta;
    for (const auto& sample : a) {
      if (sample.eta < lo || sample.eta > hi) continue;
      result.eta.push_back(sample.eta);
      pa.push_back(sample.point);
      pb.push_back(interpolate(b, sample.eta));
    }
    if (pa.empty()) {
      throw ValidationError("trajectories share no overlapping eta range");
    }
  }
  result.comparison = compare_points(pa, pb);
  return result;
}

}  // namespace exonav
