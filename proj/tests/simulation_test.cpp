#include <gtest/gtest.h>

#include <array>
#include <random>

#include "exonav/errors.hpp"
#include "exonav/io.hpp"
#include "exonav/simulation.hpp"

namespace exonav {
namespace {

class SimulationTest : public ::testing::Test {
 protected:
  TubeSpec tube = TubeSpec::reference_prototype();
  TendonSpec tendon = TendonSpec::reference_prototype();
  DerivedGeometry geom = derive_geometry(tube);
};

std::string serialize(const SyntheticDataset& d) {
  std::string out;
  for (const auto& m : d.markers) {
    TipTrajectory t;
    for (std::size_t i = 0; i < m.measured.size(); ++i) {
      t.push_back({static_cast<double>(i), m.measured[i]});
    }
    out += io::tip_csv(t);
  }
  TipTrajectory tip;
  for (std::size_t i = 0; i < d.tip_measured.size(); ++i) {
    tip.push_back({d.measured[i].stroke, d.tip_measured[i]});
  }
  return out + io::tip_csv(tip);
}

TEST_F(SimulationTest, SameSeedGivesBitIdenticalDatasets) {
  const auto profile = linear_stroke_profile(0.0, 4.0, 41);
  const auto markers = reference_marker_arclengths();
  for (const NoiseSpec noise : {NoiseSpec{0.0, 0.0, 3}, NoiseSpec{0.5, 0.05, 3}}) {
    const auto a = synthetic_sweep(tube, tendon, profile, markers, noise, 0.2);
    const auto b = synthetic_sweep(tube, tendon, profile, markers, noise, 0.2);
    EXPECT_EQ(serialize(a), serialize(b));
    for (std::size_t i = 0; i < a.tip_measured.size(); ++i) {
      EXPECT_EQ(a.tip_measured[i], b.tip_measured[i]);
    }
  }
  const auto c = synthetic_sweep(tube, tendon, profile, markers, {0.5, 0.0, 4}, 0.2);
  const auto d = synthetic_sweep(tube, tendon, profile, markers, {0.5, 0.0, 3}, 0.2);
  EXPECT_NE(serialize(c), serialize(d));
}

TEST_F(SimulationTest, DrawsDependOnlyOnSampleIndex) {
  // A partition of the profile reproduces the same noise for shared indices.
  const auto profile = linear_stroke_profile(0.0, 4.0, 11);
  const std::vector<double> markers{30.0};
  const NoiseSpec noise{0.5, 0.1, 11};
  const auto full = synthetic_sweep(tube, tendon, profile, markers, noise, 0.0);
  const std::vector<ActuationSample> head(profile.begin(), profile.begin() + 5);
  const auto part = synthetic_sweep(tube, tendon, head, markers, noise, 0.0);
  for (std::size_t i = 0; i < part.tip_measured.size(); ++i) {
    EXPECT_EQ(part.tip_measured[i], full.tip_measured[i]);
    EXPECT_EQ(part.measured[i].stroke, full.measured[i].stroke);
  }
}

TEST_F(SimulationTest, NoiselessTracksSatisfyKinematics) {
  const auto profile = linear_stroke_profile(0.0, 5.0, 26);
  const auto data = synthetic_sweep(tube, tendon, profile, reference_marker_arclengths(),
                                    {0.0, 0.0, 1}, 0.7);
  ASSERT_EQ(data.joints.size(), 26u);
  EXPECT_TRUE(data.failures.empty());
  for (std::size_t i = 0; i < data.joints.size(); ++i) {
    const JointState& j = data.joints[i];
    EXPECT_LT(closure_residual(j, geom), 1e-9);
    EXPECT_NEAR(data.tip_truth[i].norm(), j.cylinder_height, 1e-9 * j.cylinder_height);
    EXPECT_EQ(data.tip_truth[i], data.tip_measured[i]);
    EXPECT_EQ(data.measured[i].stroke, profile[i].stroke);
  }
}

TEST_F(SimulationTest, ZeroNoiseEstimationRoundTrip) {
  const auto profile = linear_stroke_profile(0.5, 5.0, 19);
  const auto data = synthetic_sweep(tube, tendon, profile, reference_marker_arclengths(),
                                    {0.0, 0.0, 9}, -1.1);
  const auto by_stroke = stroke_based_estimate(data.measured, geom, tendon, data.theta);
  const auto by_position = position_based_estimate(data.tip_measured, geom, data.theta);
  ASSERT_EQ(by_stroke.joint_series.size(), data.joints.size());
  ASSERT_EQ(by_position.joint_series.size(), data.joints.size());
  for (std::size_t i = 0; i < data.joints.size(); ++i) {
    const JointState& t = data.joints[i];
    for (const JointState& e : {by_stroke.joint_series[i], by_position.joint_series[i]}) {
      EXPECT_NEAR(e.cylinder_radius, t.cylinder_radius, 1e-9);
      EXPECT_NEAR(e.cylinder_height, t.cylinder_height, 1e-9);
      EXPECT_NEAR(e.deflection_angle, t.deflection_angle, 1e-9);
    }
  }
  for (const auto& cmp : score_estimate(data, by_position, geom)) {
    EXPECT_LT(cmp.max_euclidean, 1e-9);
  }
}

TEST_F(SimulationTest, UnreachableStrokesAreRecordedNotFatal) {
  const std::vector<ActuationSample> profile{{1.0, 0.0}, {50.0, 0.0}, {2.0, 0.0}};
  const auto data = synthetic_sweep(tube, tendon, profile, {}, {}, 0.0);
  EXPECT_EQ(data.sample_index, (std::vector<std::size_t>{0, 2}));
  ASSERT_EQ(data.failures.size(), 1u);
  EXPECT_EQ(data.failures[0].index, 1u);
  EXPECT_THROW(synthetic_sweep(tube, tendon, profile, std::vector<double>{70.0}, {}, 0.0),
               std::out_of_range);
  EXPECT_THROW(synthetic_sweep(tube, tendon, profile, {}, {-0.1, 0.0, 0}, 0.0),
               ValidationError);
}

TEST_F(SimulationTest, NoisyPositionEstimateMatchesMonteCarloOracle) {
  // Independent numpy Monte Carlo (4000 runs) of the same experiment:
  // strokes 1..5 mm in 41 steps, tip noise sigma = 0.5 mm per axis, position
  // based estimate, per-marker RMSE against the noiseless tracks.
  constexpr std::array<double, 4> kExpected{0.3976, 0.5691, 0.6136, 0.6999};
  constexpr std::array<double, 4> kSpread{0.0584, 0.0708, 0.0598, 0.0547};
  constexpr int kRuns = 300;
  const auto profile = linear_stroke_profile(1.0, 5.0, 41);
  std::array<double, 4> mean{};
  for (int run = 0; run < kRuns; ++run) {
    const auto data = synthetic_sweep(tube, tendon, profile, reference_marker_arclengths(),
                                      {0.5, 0.0, static_cast<std::uint64_t>(1000 + run)},
                                      0.0);
    const auto est = position_based_estimate(data.tip_measured, geom, 0.0);
    const auto scores = score_estimate(data, est, geom);
    ASSERT_EQ(scores.size(), 4u);
    for (std::size_t m = 0; m < 4; ++m) mean[m] += scores[m].rmse / kRuns;
  }
  for (std::size_t m = 0; m < 4; ++m) {
    // Five standard errors of the mean.
    EXPECT_NEAR(mean[m], kExpected[m], 5 * kSpread[m] / std::sqrt(kRuns)) << m;
  }
}

TEST_F(SimulationTest, FtlEndpointGrid) {
  const JointState j = joint_from_stroke(3.0, 0.0, tendon, geom, 0.5);
  const std::vector<double> grid{0.0, 1.0};
  const FtlRun run = ftl_run(j, geom, grid);
  ASSERT_EQ(run.tip.size(), 2u);
  EXPECT_EQ(run.tip[0].point, Point3::Zero());
  EXPECT_LT((run.tip[1].point - backbone_point(j, geom, geom.na_length)).norm(), 1e-12);
  EXPECT_EQ(run.exposed[0].size(), 1u);
  EXPECT_EQ(run.exposed[1].size(), 2u);
}

TEST_F(SimulationTest, FtlPrefixPropertyAndZeroFidelity) {
  const JointState j = joint_from_stroke(4.2, 1.0, tendon, geom, -0.3);
  const auto grid = uniform_grid(1.0, kDefaultEtaSteps);
  const FtlRun run = ftl_run(j, geom, grid);
  const BackboneCurve& final_backbone = run.exposed.back();
  ASSERT_EQ(final_backbone.size(), grid.size());
  for (std::size_t k = 0; k < run.exposed.size(); ++k) {
    ASSERT_EQ(run.exposed[k].size(), k + 1);
    for (std::size_t i = 0; i <= k; ++i) {
      EXPECT_LT((run.exposed[k][i].point - final_backbone[i].point).norm(), 1e-9);
    }
  }
  const auto fidelity = ftl_fidelity(run.tip, final_backbone, geom.na_length);
  EXPECT_LT(fidelity.max_euclidean, 1e-9);
  EXPECT_EQ(ftl_tip_with_theta_drift(j, geom, grid, 0.0).back().point, run.tip.back().point);
}

TEST_F(SimulationTest, FtlRetractionGivesSameGeometry) {
  const JointState j = joint_from_stroke(2.5, 0.0, tendon, geom, 1.0);
  const auto forward = uniform_grid(1.0, 21);
  const std::vector<double> backward(forward.rbegin(), forward.rend());
  const FtlRun a = ftl_run(j, geom, forward);
  const FtlRun b = ftl_run(j, geom, backward);
  for (std::size_t i = 0; i < forward.size(); ++i) {
    const std::size_t r = forward.size() - 1 - i;
    EXPECT_EQ(a.tip[i].point, b.tip[r].point);
    ASSERT_EQ(a.exposed[i].size(), b.exposed[r].size());
  }
  EXPECT_LT(ftl_fidelity(b.tip, a.exposed.back(), geom.na_length).max_euclidean, 1e-9);
}

TEST_F(SimulationTest, FtlRejectsBadGrids) {
  const JointState j = joint_from_stroke(1.0, 0.0, tendon, geom, 0.0);
  EXPECT_THROW(ftl_run(j, geom, std::vector<double>{0.0, 1.2}), std::out_of_range);
  EXPECT_THROW(ftl_run(j, geom, std::vector<double>{0.0, 0.5, 0.4}), ValidationError);
  EXPECT_THROW(ftl_run(j, geom, std::vector<double>{}), ValidationError);
  const FtlRun run = ftl_run(j, geom, uniform_grid(1.0, 11));
  const FtlRun coarse = ftl_run(j, geom, uniform_grid(1.0, 6));
  EXPECT_THROW(ftl_fidelity(run.tip, coarse.exposed.back(), geom.na_length),
               ValidationError);
}

TEST_F(SimulationTest, ThetaDriftDeviationGrowsAlongRun) {
  const JointState j = joint_from_stroke(2.0, 0.0, tendon, geom, 0.0);
  const auto grid = uniform_grid(1.0, kDefaultEtaSteps);
  const FtlRun run = ftl_run(j, geom, grid);
  const auto drifted = ftl_tip_with_theta_drift(j, geom, grid, 0.1);
  const auto cmp = ftl_fidelity(drifted, run.exposed.back(), geom.na_length);
  EXPECT_EQ(cmp.per_sample_distances.front(), 0.0);
  for (std::size_t i = 1; i < cmp.per_sample_distances.size(); ++i) {
    EXPECT_GT(cmp.per_sample_distances[i], cmp.per_sample_distances[i - 1]) << i;
  }
  // Direct evaluation: a rotation by 0.1 rad about X_0 of the final tip.
  const Point3 tip = run.tip.back().point;
  EXPECT_NEAR(cmp.per_sample_distances.back(),
              2.0 * std::hypot(tip.y(), tip.z()) * std::sin(0.05), 1e-12);
  EXPECT_NEAR(cmp.per_sample_distances.back(), 1.623359267567995, 1e-9);

  double previous = 0.0;
  for (double drift : {0.01, 0.05, 0.1}) {
    const double r =
        ftl_fidelity(ftl_tip_with_theta_drift(j, geom, grid, drift), run.exposed.back(),
                     geom.na_length)
            .rmse;
    EXPECT_GT(r, previous);
    previous = r;
  }
}

BackboneCurve straight_curve(double length, std::size_t count) {
  BackboneCurve c;
  for (double s : uniform_grid(length, count)) c.push_back({s, Point3(s, 0, 0)});
  return c;
}

TEST(Clearance, ParallelOffsetPhantom) {
  const PhantomSpec phantom{Point3(0, 10, 0), Vector3::UnitX(), 4.0};
  const auto r = phantom_clearance(straight_curve(64, 65), phantom, 0.953);
  EXPECT_NEAR(r.min_clearance, 5.047, 1e-12);
  EXPECT_FALSE(r.collides);
}

TEST(Clearance, SurfaceContactAndLineCase) {
  const PhantomSpec phantom{Point3(0, 0, 4), Vector3::UnitY(), 4.0};
  BackboneCurve c{{0, Point3(5, 5, 4)}, {1, Point3(0, 3, 0)}, {2, Point3(-2, 0, 9)}};
  auto r = phantom_clearance(c, phantom, 0.953);
  EXPECT_NEAR(r.min_clearance, -0.953, 1e-12);
  EXPECT_TRUE(r.collides);
  EXPECT_EQ(r.closest_index, 1u);

  const PhantomSpec line{Point3(0, 0, 4), Vector3::UnitY(), 0.0};
  r = phantom_clearance(c, line, 0.5);
  EXPECT_NEAR(r.min_clearance, 4.0 - 0.5, 1e-12);
  EXPECT_EQ(r.closest_index, 1u);
}

TEST(Clearance, InvalidPhantom) {
  const BackboneCurve c = straight_curve(10, 3);
  EXPECT_THROW(phantom_clearance(c, {Point3::Zero(), Vector3(1, 1, 0), 1.0}, 0.1),
               ValidationError);
  EXPECT_THROW(phantom_clearance(c, {Point3::Zero(), Vector3::UnitX(), -1.0}, 0.1),
               ValidationError);
  EXPECT_THROW(phantom_clearance({}, {Point3::Zero(), Vector3::UnitX(), 1.0}, 0.1),
               ValidationError);
}

TEST(Clearance, InvariantUnderRigidMotion) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 10.0);
  const auto tube = TubeSpec::reference_prototype();
  const auto geom = derive_geometry(tube);
  const JointState j =
      joint_from_stroke(5.0, 0.0, TendonSpec::reference_prototype(), geom, 0.3);
  const BackboneCurve curve = forward_kinematics(j, geom, uniform_grid(geom.na_length));
  const PhantomSpec phantom = phantom_on_cylinder_axis(j, 4.0);
  const auto base = phantom_clearance(curve, phantom, tube.outer_radius);
  EXPECT_GT(base.min_clearance, 0.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Matrix3d rot =
        Eigen::Quaterniond(n(rng), n(rng), n(rng), n(rng)).normalized().toRotationMatrix();
    const Vector3 shift(n(rng), n(rng), n(rng));
    BackboneCurve moved = curve;
    for (auto& p : moved) p.point = rot * p.point + shift;
    const PhantomSpec moved_phantom{rot * phantom.axis_point + shift,
                                    (rot * phantom.axis_direction).normalized(),
                                    phantom.radius};
    const auto r = phantom_clearance(moved, moved_phantom, tube.outer_radius);
    EXPECT_NEAR(r.min_clearance, base.min_clearance, 1e-9);
    EXPECT_EQ(r.collides, base.collides);
  }
}

}  // namespace
}  // namespace exonav
