#include <gtest/gtest.h>

#include "air/error.hpp"
#include "air/evaluation.hpp"
#include "test_util.hpp"

using namespace air;

namespace {

CornerSet grid(int n, const Vec2& shift = Vec2::Zero()) {
  CornerSet s{{}, 1920, 1080};
  for (int i = 0; i < n; ++i) s.corners.push_back({i, Vec2(100.0 + 10 * i, 50.0 + 7 * i) + shift});
  return s;
}

}  // namespace

TEST(Dislocation, IdenticalSetsAreZero) {
  const Dislocation d = corner_dislocation(grid(40), grid(40));
  EXPECT_EQ(d.mean_px, 0.0);
  EXPECT_EQ(d.per_corner.size(), 40u);
  EXPECT_TRUE(d.unresolved.empty());
}

TEST(Dislocation, PythagoreanShift) {
  EXPECT_EQ(corner_dislocation(grid(40), grid(40, {3, 4})).mean_px, 5.0);
}

TEST(Dislocation, UnsharedIndicesExcluded) {
  CornerSet test = grid(10, {3, 4});
  test.corners.erase(test.corners.begin() + 2);
  test.corners.push_back({99, Vec2(0, 0)});
  const Dislocation d = corner_dislocation(grid(10), test);
  EXPECT_EQ(d.mean_px, 5.0);
  EXPECT_EQ(d.per_corner.size(), 9u);
  EXPECT_EQ(d.unresolved, (std::vector<int>{2, 99}));
}

TEST(Dislocation, SymmetricAndOrderIndependent) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 2.0);
  CornerSet a = grid(30);
  CornerSet b = grid(30);
  for (auto& c : b.corners) c.second += Vec2(n(rng), n(rng));
  std::reverse(b.corners.begin(), b.corners.end());
  EXPECT_DOUBLE_EQ(corner_dislocation(a, b).mean_px, corner_dislocation(b, a).mean_px);
  EXPECT_GT(corner_dislocation(a, b).mean_px, 0.0);
}

TEST(Dislocation, Errors) {
  CornerSet a = grid(3);
  CornerSet b{{{7, Vec2(0, 0)}}, 1920, 1080};
  try {
    corner_dislocation(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::empty_intersection);
  }
  a.corners.push_back({0, Vec2(1, 1)});
  try {
    corner_dislocation(a, grid(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_argument);
  }
}

TEST(SceneVariants, NamesRoundTrip) {
  for (const auto v : {SceneVariant::base_plane, SceneVariant::oblique_plane, SceneVariant::box,
                       SceneVariant::cylinder, SceneVariant::sphere_cluster, SceneVariant::cloth,
                       SceneVariant::grazing_slats, SceneVariant::frontal_steps}) {
    EXPECT_EQ(scene_variant_from_string(to_string(v)), v);
    EXPECT_FALSE(standard_scene(v).surfaces().empty());
  }
  EXPECT_FALSE(scene_variant_from_string("teapot"));
}

namespace {

BenchmarkSettings small_settings() {
  BenchmarkSettings s;
  return s;
}

BenchmarkCase make_case(const std::string& name, SceneVariant v, Correction c) {
  BenchmarkCase bc;
  bc.name = name;
  bc.variant = v;
  bc.correction = c;
  return bc;
}

}  // namespace

TEST(Benchmark, BaseAgainstBaseIsZero) {
  const auto report = run_benchmark({make_case("base", SceneVariant::base_plane, Correction::on),
                                     make_case("again", SceneVariant::base_plane, Correction::on)},
                                    small_settings());
  ASSERT_EQ(report.cases.size(), 2u);
  EXPECT_TRUE(report.cases[1].ok);
  EXPECT_EQ(report.cases[1].mean_dislocation_px, 0.0);
  EXPECT_EQ(report.cases[1].unresolved, 0);
}

TEST(Benchmark, FirstCaseMustBeBase) {
  EXPECT_THROW(run_benchmark({make_case("box", SceneVariant::box, Correction::on)}, small_settings()),
               Error);
}

TEST(Benchmark, CorrectionNeverWorseThanPassthrough) {
  std::vector<BenchmarkCase> suite{make_case("base", SceneVariant::base_plane, Correction::on)};
  for (const auto v : {SceneVariant::oblique_plane, SceneVariant::box, SceneVariant::cylinder,
                       SceneVariant::sphere_cluster, SceneVariant::cloth}) {
    suite.push_back(make_case(std::string(to_string(v)), v, Correction::on));
    suite.push_back(make_case(std::string(to_string(v)) + "_off", v, Correction::off));
  }
  const auto report = run_benchmark(suite, small_settings());
  for (std::size_t k = 1; k < report.cases.size(); k += 2) {
    const auto& on = report.cases[k];
    const auto& off = report.cases[k + 1];
    ASSERT_TRUE(on.ok) << on.error;
    ASSERT_TRUE(off.ok) << off.error;
    EXPECT_LE(on.mean_dislocation_px, off.mean_dislocation_px) << on.name;
    EXPECT_LE(on.mean_dislocation_px, 0.5) << on.name;
  }
}

TEST(Benchmark, FailingCaseIsRecorded) {
  // An invalid noise model makes the case throw.
  BenchmarkCase blind = make_case("blind", SceneVariant::box, Correction::on);
  blind.noise.sigma = -1.0;
  const auto report = run_benchmark({make_case("base", SceneVariant::base_plane, Correction::on), blind,
                                     make_case("box", SceneVariant::box, Correction::on)},
                                    small_settings());
  ASSERT_EQ(report.cases.size(), 3u);
  EXPECT_FALSE(report.cases[1].ok);
  EXPECT_NE(report.cases[1].error.find("invalid-argument"), std::string::npos);
  EXPECT_TRUE(report.cases[2].ok);
}

TEST(Benchmark, BaseFailureAborts) {
  BenchmarkSettings s = small_settings();
  s.state = {deg2rad(120.0), 0.0};
  try {
    run_benchmark({make_case("base", SceneVariant::base_plane, Correction::on)}, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::stage);
  }
}
