#include <gtest/gtest.h>

#include "air/error.hpp"
#include "air/geometry.hpp"
#include "test_util.hpp"

using namespace air;

TEST(Rodrigues, ZeroAngleIsIdentity) {
  EXPECT_EQ(rotation_about_axis(Vec3(0, 0, 1), 0.0), Mat3::Identity());
}

TEST(Rodrigues, QuarterTurnAboutZ) {
  Mat3 expected;
  expected << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  EXPECT_LE((rotation_about_axis(Vec3(0, 0, 1), kPi / 2) - expected).norm(), 1e-15);
}

TEST(Rodrigues, DiagonalAxisPermutesBasis) {
  const Mat3 r = rotation_about_axis(Vec3(1, 1, 1).normalized(), 2 * kPi / 3);
  EXPECT_VEC_NEAR(r * Vec3::UnitX(), Vec3::UnitY(), 1e-15);
  EXPECT_VEC_NEAR(r * Vec3::UnitY(), Vec3::UnitZ(), 1e-15);
}

TEST(Rodrigues, RejectsNonUnitAxis) {
  try {
    rotation_about_axis(Vec3(0, 0, 1.01), 0.3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_argument);
  }
  EXPECT_NO_THROW(rotation_about_axis(Vec3(0, 0, 1 + 5e-7), 0.3));
}

TEST(Rodrigues, MatchesEigenAngleAxis) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> a(-2 * kPi, 2 * kPi);
  for (int k = 0; k < 200; ++k) {
    const Vec3 axis = test::random_unit(rng);
    const double theta = a(rng);
    const Mat3 ref = Eigen::AngleAxisd(theta, axis).toRotationMatrix();
    EXPECT_LE((rotation_about_axis(axis, theta) - ref).norm(), 1e-13);
  }
}

TEST(Rodrigues, Properties) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> a(-kPi, kPi);
  for (int k = 0; k < 500; ++k) {
    const Vec3 axis = test::random_unit(rng);
    const double theta = a(rng);
    const Mat3 r = rotation_about_axis(axis, theta);
    EXPECT_LE((r * r.transpose() - Mat3::Identity()).norm(), 1e-12);
    EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
    EXPECT_VEC_NEAR(r * axis, axis, 1e-12);
    EXPECT_LE((r * rotation_about_axis(axis, -theta) - Mat3::Identity()).norm(), 1e-12);
  }
}

TEST(UnitAxis, NormalizesAndChecks) {
  EXPECT_NEAR(UnitAxis::from(Vec3(3, 0, 4)).direction().norm(), 1.0, 1e-15);
  EXPECT_THROW(UnitAxis::from(Vec3::Zero()), Error);
  EXPECT_THROW(UnitAxis::checked(Vec3(2, 0, 0)), Error);
  EXPECT_EQ(UnitAxis::from(Vec3::UnitY()).flipped().direction(), Vec3(0, -1, 0));
}

TEST(AngleBetween, SmallAnglesAreAccurate) {
  const Vec3 a(0, 0, 1);
  const Vec3 b(1e-9, 0, 1);
  EXPECT_NEAR(angle_between(a, b), 1e-9, 1e-20);
  EXPECT_NEAR(angle_between(a, -a), kPi, 1e-15);
}

TEST(RigidTransform, CompositionAndInverse) {
  std::mt19937_64 rng(3);
  const RigidTransform a = test::random_pose(rng);
  const RigidTransform b = test::random_pose(rng);
  const Vec3 p(0.3, -0.2, 1.7);
  EXPECT_VEC_NEAR((a * b).apply(p), a.apply(b.apply(p)), 1e-14);
  EXPECT_VEC_NEAR((a * a.inverse()).apply(p), p, 1e-14);
  EXPECT_LE((a.matrix() * a.inverse().matrix() - Mat4::Identity()).norm(), 1e-14);
}

TEST(RigidTransform, FromMatrixOrthonormalizes) {
  Mat3 r = rotation_about_axis(Vec3(0, 1, 0), 0.4);
  r(0, 1) += 1e-4;
  const RigidTransform t = RigidTransform::from_matrix(r, Vec3::Zero());
  EXPECT_LE((t.rotation * t.rotation.transpose() - Mat3::Identity()).norm(), 1e-14);
  EXPECT_NEAR(t.rotation.determinant(), 1.0, 1e-14);
}

TEST(RotationVector, RoundTrip) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> a(0.0, kPi - 1e-3);
  for (int k = 0; k < 200; ++k) {
    const Vec3 v = test::random_unit(rng) * a(rng);
    EXPECT_VEC_NEAR(rotation_vector(rotation_from_vector(v)), v, 1e-10);
  }
  EXPECT_VEC_NEAR(rotation_vector(Mat3::Identity()), Vec3::Zero(), 0.0);
}

namespace {
PinholeDevice test_device() { return {1000, 1000, 500, 500, 0, 1000, 1000}; }
}  // namespace

TEST(Project, PrincipalRay) {
  const auto p = project(test_device(), RigidTransform::identity(), Vec3(0, 0, 2));
  EXPECT_EQ(p.pixel, Vec2(500, 500));
  EXPECT_EQ(p.depth, 2.0);
}

TEST(Project, OffAxisPoint) {
  const auto p = project(test_device(), RigidTransform::identity(), Vec3(0.1, 0, 1));
  EXPECT_NEAR(p.pixel.x(), 600.0, 1e-12);
  EXPECT_NEAR(p.pixel.y(), 500.0, 1e-12);
  EXPECT_EQ(p.depth, 1.0);
}

TEST(Project, BehindDevice) {
  for (const double z : {0.0, -1.0}) {
    try {
      project(test_device(), Vec3(0, 0, z));
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::behind_device);
    }
  }
}

TEST(Backproject, Examples) {
  const PinholeDevice d = test_device();
  EXPECT_VEC_NEAR(backproject(d, {d.cx, d.cy}, 3.0), Vec3(0, 0, 3), 1e-15);
  EXPECT_VEC_NEAR(backproject(d, {d.cx + d.fx, d.cy}, 1.0), Vec3(1, 0, 1), 1e-15);
  EXPECT_THROW(backproject(d, {1, 1}, 0.0), Error);
}

TEST(Backproject, RoundTripWithSkew) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 300; ++k) {
    PinholeDevice d{400 + 1000 * u(rng), 400 + 1000 * u(rng), 300 + 400 * u(rng), 200 + 300 * u(rng),
                    5 * (u(rng) - 0.5), 1280, 720};
    const RigidTransform pose = test::random_pose(rng);
    const Vec2 px(1280 * u(rng), 720 * u(rng));
    const double depth = 0.2 + 5 * u(rng);
    const Vec3 local = backproject(d, px, depth);
    const Vec3 world = pose.inverse().apply(local);
    const auto p = project(d, pose, world);
    EXPECT_VEC_NEAR(p.pixel, px, 1e-9);
    EXPECT_NEAR(p.depth, depth, 1e-9);
  }
}

TEST(PixelRay, UnitAndThroughPixel) {
  const PinholeDevice d = test_device();
  const Vec3 r = pixel_ray(d, {123.0, 456.0});
  EXPECT_NEAR(r.norm(), 1.0, 1e-15);
  EXPECT_VEC_NEAR(project(d, r).pixel, Vec2(123.0, 456.0), 1e-9);
}

TEST(Device, FootprintAndValidation) {
  const PinholeDevice d{500, 500, 1.5, 1.5, 0, 4, 4};
  EXPECT_TRUE(d.in_image({-0.5, -0.5}));
  EXPECT_FALSE(d.in_image({3.5, 0}));
  EXPECT_FALSE(d.in_image({0, -0.51}));
  PinholeDevice bad = d;
  bad.fx = 0;
  EXPECT_THROW(bad.validate(), Error);
  bad = d;
  bad.width = 0;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(RigidAlign, Identity) {
  const std::vector<Vec3> s{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const auto a = rigid_align(s, s);
  EXPECT_LE((a.transform.rotation - Mat3::Identity()).norm(), 1e-14);
  EXPECT_LE(a.transform.translation.norm(), 1e-14);
  EXPECT_LE(a.rms, 1e-14);
}

TEST(RigidAlign, PureTranslation) {
  const std::vector<Vec3> s{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0.3, 0.2, 1}};
  std::vector<Vec3> t;
  for (const auto& p : s) t.push_back(p + Vec3(1, 2, 3));
  const auto a = rigid_align(s, t);
  EXPECT_VEC_NEAR(a.transform.translation, Vec3(1, 2, 3), 1e-13);
  EXPECT_LE(rotation_distance(a.transform.rotation, Mat3::Identity()), 1e-13);
}

TEST(RigidAlign, ExactOnNoiselessData) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const RigidTransform truth = test::random_pose(rng, 2.0);
    std::vector<Vec3> s, t;
    for (int i = 0; i < 20; ++i) {
      s.emplace_back(u(rng), u(rng), u(rng));
      t.push_back(truth.apply(s.back()));
    }
    const auto a = rigid_align(s, t);
    EXPECT_LT(a.rms, 1e-10);
    EXPECT_LT(rotation_distance(a.transform.rotation, truth.rotation), 1e-10);
  }
}

TEST(RigidAlign, RecoversUnderMillimeterNoise) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::normal_distribution<double> n(0.0, 0.001);
  const RigidTransform truth = test::random_pose(rng, 1.0);
  std::vector<Vec3> s, t;
  for (int i = 0; i < 54; ++i) {
    s.emplace_back(u(rng), u(rng), u(rng));
    t.push_back(truth.apply(s.back()) + Vec3(n(rng), n(rng), n(rng)));
  }
  const auto a = rigid_align(s, t);
  EXPECT_LT(rotation_distance(a.transform.rotation, truth.rotation), deg2rad(0.1));
  EXPECT_LT((a.transform.translation - truth.translation).norm(), 0.002);
}

TEST(RigidAlign, NeverReturnsReflection) {
  // Mirrored target: the best proper rotation still has det +1.
  const std::vector<Vec3> s{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}};
  std::vector<Vec3> t;
  for (const auto& p : s) t.emplace_back(-p.x(), p.y(), p.z());
  const auto a = rigid_align(s, t);
  EXPECT_NEAR(a.transform.rotation.determinant(), 1.0, 1e-12);
}

TEST(RigidAlign, DegenerateInputs) {
  const std::vector<Vec3> two{{0, 0, 0}, {1, 0, 0}};
  const std::vector<Vec3> line{{0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {3, 3, 3}};
  for (const auto* s : {&two, &line}) {
    try {
      rigid_align(*s, *s);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::degenerate_configuration);
    }
  }
}
