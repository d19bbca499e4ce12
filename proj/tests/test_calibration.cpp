#include <gtest/gtest.h>

#include <algorithm>

#include "air/calibration.hpp"
#include "air/error.hpp"
#include "air/simulation.hpp"
#include "test_util.hpp"

using namespace air;

namespace {

std::vector<Vec3> board_points() {
  std::vector<Vec3> pts;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 9; ++j) pts.emplace_back(-0.16 + 0.04 * j, -0.1 + 0.04 * i, 1.5);
  }
  return pts;
}

AxisObservationSet synth_axis(const Vec3& axis, const std::vector<double>& angles_deg,
                              const std::vector<Vec3>& world, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, sigma);
  AxisObservationSet set;
  for (const double a : angles_deg) {
    AxisObservationSet::Record r;
    r.theta = deg2rad(a);
    const Mat3 rot = rotation_about_axis(axis.normalized(), r.theta);
    for (std::size_t i = 0; i < world.size(); ++i) {
      Vec3 p = rot.transpose() * world[i];
      if (sigma > 0) p += Vec3(n(rng), n(rng), n(rng));
      r.corners.push_back({static_cast<int>(i), p});
    }
    set.records.push_back(std::move(r));
  }
  return set;
}

double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size()))) - 1;
  return v[std::min(k, v.size() - 1)];
}

std::vector<CornerObservation> to_world(const RigModel& rig, const RearRegistrationRecord& r) {
  const Mat3 motor = pan_tilt_rotation(rig, r.front_state);
  std::vector<CornerObservation> out;
  for (const auto& c : r.front_corners) out.push_back({c.index, motor * c.point});
  return out;
}

}  // namespace

TEST(AxisEstimation, NoiselessRoundTrip) {
  const auto set = synth_axis(Vec3::UnitY(), {-20, 0, 20}, board_points(), 0.0, 0);
  const AxisEstimate est = estimate_axis(set);
  EXPECT_LT(angle_between(est.axis.direction(), Vec3::UnitY()), 1e-8);
  EXPECT_LT(est.rms, 1e-9);
}

TEST(AxisEstimation, SignFollowsRotationSense) {
  const Vec3 axis = Vec3(0.05, -1.0, 0.02).normalized();
  const auto set = synth_axis(axis, {-30, -10, 10, 30}, board_points(), 0.0, 0);
  EXPECT_LT(angle_between(estimate_axis(set).axis.direction(), axis), 1e-8);
}

TEST(AxisEstimation, CostIsZeroAtTruthOnly) {
  const Vec3 axis = Vec3(0.035, 1, 0.038).normalized();
  const auto set = synth_axis(axis, {-21, -7, 7, 21}, board_points(), 0.0, 0);
  EXPECT_LT(axis_consistency_cost(set, axis), 1e-24);
  EXPECT_GT(axis_consistency_cost(set, -axis), 1e-4);
  EXPECT_GT(axis_consistency_cost(set, rotation_about_axis(Vec3::UnitX(), 0.01) * axis), 1e-8);
}

TEST(AxisEstimation, CornersOnAxisAreDegenerate) {
  const std::vector<Vec3> on_axis{{0, 0, 0}, {0, 1, 0}, {0, -0.5, 0}};
  const auto set = synth_axis(Vec3::UnitY(), {-20, 0, 20}, on_axis, 0.0, 0);
  try {
    estimate_axis(set);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_configuration);
  }
}

TEST(AxisEstimation, TooFewAnglesAreDegenerate) {
  const auto set = synth_axis(Vec3::UnitY(), {-20, 20}, board_points(), 0.0, 0);
  EXPECT_THROW(estimate_axis(set), Error);
}

TEST(AxisEstimation, MillimeterNoiseMonteCarlo) {
  const Vec3 axis = rotation_about_axis(Vec3::UnitX(), deg2rad(3.0)) * Vec3::UnitY();
  std::vector<double> errors;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto set = synth_axis(axis, {-21, -14, -7, 0, 7, 14, 21}, board_points(), 0.001, seed);
    errors.push_back(rad2deg(angle_between(estimate_axis(set).axis.direction(), axis)));
  }
  EXPECT_LT(percentile(errors, 0.95), 0.5);
}

TEST(RearRegistration, SameCameraAtHome) {
  std::vector<CornerObservation> obs;
  int k = 0;
  for (const auto& p : board_points()) obs.push_back({k++, p});
  const auto reg = register_rear_camera(obs, obs, {}, UnitAxis::from(Vec3::UnitY()),
                                        UnitAxis::from(Vec3::UnitX()));
  EXPECT_LT(rotation_distance(reg.rear_to_front.rotation, Mat3::Identity()), 1e-12);
  EXPECT_LT(reg.rear_to_front.translation.norm(), 1e-12);
}

TEST(RearRegistration, SyntheticRigRoundTrip) {
  const RigModel rig = default_rig();
  CalibrationProtocol protocol = default_protocol();
  const CalibrationSession s = simulate_calibration_session(rig, protocol);
  const auto reg = register_rear_camera(to_world(rig, s.rear), s.rear.rear_corners, s.rear.rear_state,
                                        rig.pan_axis, rig.tilt_axis);
  EXPECT_LT(rotation_distance(reg.rear_to_front.rotation, rig.rear_to_front.rotation), 1e-9);
  EXPECT_LT((reg.rear_to_front.translation - rig.rear_to_front.translation).norm(), 1e-9);
}

TEST(RearRegistration, MillimeterNoiseMonteCarlo) {
  const RigModel rig = default_rig();
  std::vector<double> rot, trans;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CalibrationProtocol protocol = default_protocol();
    protocol.corner_sigma = 0.001;
    protocol.seed = seed;
    const CalibrationSession s = simulate_calibration_session(rig, protocol);
    ASSERT_EQ(s.rear.rear_corners.size(), 54u);
    const auto reg = register_rear_camera(to_world(rig, s.rear), s.rear.rear_corners,
                                          s.rear.rear_state, rig.pan_axis, rig.tilt_axis);
    rot.push_back(rad2deg(rotation_distance(reg.rear_to_front.rotation, rig.rear_to_front.rotation)));
    trans.push_back((reg.rear_to_front.translation - rig.rear_to_front.translation).norm());
  }
  EXPECT_LT(percentile(rot, 0.95), 0.2);
  EXPECT_LT(percentile(trans, 0.95), 0.003);
}

TEST(ProjectorCalibration, NoiselessRoundTrip) {
  RigModel rig = default_rig();
  rig.proj_device = {1500, 1500, 960, 540, 0, 1920, 1080};
  const auto samples = simulate_projector_correspondences(rig, default_protocol());
  const ProjectorCalibration cal = calibrate_projector(samples.clean);
  const auto& k = cal.intrinsics;
  EXPECT_LT(std::abs(k.fx - 1500) / 1500, 1e-4);
  EXPECT_LT(std::abs(k.fy - 1500) / 1500, 1e-4);
  EXPECT_LT(std::abs(k.cx - 960) / 960, 1e-4);
  EXPECT_LT(std::abs(k.cy - 540) / 540, 1e-4);
  EXPECT_LT(rotation_distance(cal.front_to_proj.rotation, rig.front_to_proj.rotation), 1e-5);
  EXPECT_LT((cal.front_to_proj.translation - rig.front_to_proj.translation).norm(), 1e-4);
  EXPECT_LT(cal.rms_px, 1e-6);
}

TEST(ProjectorCalibration, DltAloneIsExactWithoutNoise) {
  const RigModel rig = default_rig();
  const auto samples = simulate_projector_correspondences(rig, default_protocol());
  const Mat34 m = projection_dlt(samples.clean);
  const ProjectionFactors f = decompose_projection(m);
  EXPECT_NEAR(f.intrinsics(0, 0), rig.proj_device.fx, 1e-6);
  EXPECT_NEAR(f.intrinsics(1, 2), rig.proj_device.cy, 1e-6);
  EXPECT_LT(rotation_distance(f.pose.rotation, rig.front_to_proj.rotation), 1e-9);
}

TEST(ProjectorCalibration, DecompositionRecoversFactors) {
  std::mt19937_64 rng(6);
  for (int k = 0; k < 20; ++k) {
    Mat3 kk;
    kk << 1200, 3, 950, 0, 1250, 530, 0, 0, 1;
    const RigidTransform pose = test::random_pose(rng);
    const double scale = (k % 2 == 0) ? 0.37 : -2.5;
    const Mat34 m = scale * kk * pose.matrix34();
    const ProjectionFactors f = decompose_projection(m);
    EXPECT_LE((f.intrinsics - kk).norm(), 1e-8);
    EXPECT_LT(rotation_distance(f.pose.rotation, pose.rotation), 1e-12);
    EXPECT_LE((f.pose.translation - pose.translation).norm(), 1e-10);
  }
}

TEST(ProjectorCalibration, SinglePlaneIsDegenerate) {
  const auto samples = simulate_projector_correspondences(default_rig(), default_protocol());
  ProjectorCorrespondenceSet one = samples.clean;
  std::erase_if(one.records, [](const auto& r) { return r.plane_id != 0; });
  ASSERT_GE(one.records.size(), 6u);
  try {
    calibrate_projector(one);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_configuration);
  }
}

TEST(ProjectorCalibration, FiveCorrespondencesUnderdetermined) {
  const auto samples = simulate_projector_correspondences(default_rig(), default_protocol());
  ProjectorCorrespondenceSet five = samples.clean;
  five.records.resize(5);
  try {
    calibrate_projector(five);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::underdetermined);
  }
}

TEST(ProjectorCalibration, RefinementDoesNotIncreaseError) {
  CalibrationProtocol protocol = default_protocol();
  protocol.depth_sigma = 0.002;
  protocol.seed = 4;
  const auto samples = simulate_projector_correspondences(default_rig(), protocol);
  const ProjectorCalibration cal = calibrate_projector(samples.noisy);
  EXPECT_LE(cal.rms_px, cal.dlt_rms_px + 1e-12);
}

TEST(FullCalibration, NoiselessResidualsVanish) {
  const CalibrationSession s = simulate_calibration_session(default_rig(), default_protocol());
  EXPECT_EQ(s.pan.records.size(), 7u);
  EXPECT_EQ(s.tilt.records.size(), 7u);
  const CalibrationResult r = run_full_calibration(s);
  EXPECT_LT(r.residuals.axis_rms_m, 1e-6);
  EXPECT_LT(r.residuals.rear_rms_m, 1e-6);
  EXPECT_LT(r.residuals.proj_reproj_rms_px, 1e-6);
  ASSERT_TRUE(r.errors.has_value());
  EXPECT_LT(r.errors->pan_axis_rad, 1e-6);
}

TEST(FullCalibration, MissingTiltNamesStage) {
  CalibrationSession s = simulate_calibration_session(default_rig(), default_protocol());
  s.tilt.records.clear();
  try {
    run_full_calibration(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::stage);
    EXPECT_NE(std::string(e.what()).find("tilt axis"), std::string::npos);
  }
}

TEST(FullCalibration, StageErrorsKeepTheirCode) {
  CalibrationSession s = simulate_calibration_session(default_rig(), default_protocol());
  s.projector.records.resize(4);
  try {
    run_full_calibration(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::underdetermined);
    EXPECT_NE(std::string(e.what()).find("projector"), std::string::npos);
  }
}

TEST(FullCalibration, ProjectorResidualNearNoiseFloor) {
  const RigModel rig = default_rig();
  CalibrationProtocol protocol = default_protocol();
  protocol.depth_sigma = 0.002;
  protocol.seed = 9;
  const auto samples = simulate_projector_correspondences(rig, protocol);
  // Floor: how far the noise alone moves points in the true projector image.
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.clean.records.size(); ++i) {
    const Vec2 a = project(rig.proj_device, rig.front_to_proj, samples.clean.records[i].point).pixel;
    const Vec2 b = project(rig.proj_device, rig.front_to_proj, samples.noisy.records[i].point).pixel;
    sum += (a - b).squaredNorm();
  }
  const double floor = std::sqrt(sum / static_cast<double>(samples.clean.records.size()));
  ASSERT_GT(floor, 0.0);
  const ProjectorCalibration cal = calibrate_projector(samples.noisy);
  EXPECT_LT(cal.rms_px, 3.0 * floor);
}
