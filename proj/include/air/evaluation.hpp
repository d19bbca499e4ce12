#pragma once

#include <optional>
#include <string>
#include <vector>

#include "air/calibration.hpp"
#include "air/image.hpp"
#include "air/rig.hpp"
#include "air/scene.hpp"
#include "air/upr.hpp"
#include "air/warp.hpp"

namespace air {

/// Corner positions in a user-view image.
struct CornerSet {
  std::vector<std::pair<int, Vec2>> corners;
  int width = 0;
  int height = 0;
};

/// Resolved corners only.
CornerSet to_corner_set(const std::vector<PropagatedCorner>& propagated, int width, int height);

struct Dislocation {
  double mean_px = 0.0;
  std::vector<std::pair<int, double>> per_corner;  // shared indices, ascending
  std::vector<int> unresolved;                     // indices present in only one set
};

/// Mean Euclidean pixel distance over corner indices present in both sets.
/// Throws empty_intersection when no index is shared and invalid_argument on
/// duplicate indices.
Dislocation corner_dislocation(const CornerSet& base, const CornerSet& test);

enum class SceneVariant {
  base_plane,
  oblique_plane,
  box,
  cylinder,
  sphere_cluster,
  cloth,
  grazing_slats,
  frontal_steps,
};

std::string_view to_string(SceneVariant variant);
std::optional<SceneVariant> scene_variant_from_string(std::string_view name);

/// Wall at z = 2.5 m plus the variant's obstacle, in world (home front camera)
/// coordinates.
Scene standard_scene(SceneVariant variant);

enum class GeometrySource {
  sensed,     // depth frame with the case's noise model
  noiseless,  // depth frame from an ideal sensor
};

struct BenchmarkCase {
  std::string name;
  SceneVariant variant = SceneVariant::base_plane;
  Correction correction = Correction::on;
  GeometrySource geometry = GeometrySource::sensed;
  DepthNoiseModel noise = DepthNoiseModel::ideal();
};

struct BenchmarkSettings {
  RigModel truth = default_rig();
  std::optional<RigModel> estimate;  // calibrated rig; truth when absent
  EyePose eye;
  PanTiltState state;
  Viewport viewport;
  CheckerPattern pattern;
  double max_depth_jump = kDefaultDiscontinuity;
  bool render_images = false;
};

struct CaseResult {
  std::string name;
  SceneVariant variant = SceneVariant::base_plane;
  Correction correction = Correction::on;
  bool ok = false;
  std::string error;
  double mean_dislocation_px = 0.0;
  std::vector<std::pair<int, double>> per_corner;
  int resolved = 0;
  int unresolved = 0;
  CornerSet corners;
  std::size_t depth_valid_pixels = 0;
  RasterImage pass1;
  RasterImage framebuffer;
  RasterImage user_view;  // with corner overlay
};

struct BenchmarkReport {
  std::vector<CaseResult> cases;

  const CaseResult* find(const std::string& name) const;
  std::string summary_text() const;
};

/// Runs each case (the first must be the planar base) through sensing, pass 1,
/// pass 2 and corner propagation, and scores it against the base. A failing
/// case is recorded and the suite continues.
BenchmarkReport run_benchmark(const std::vector<BenchmarkCase>& suite,
                              const BenchmarkSettings& settings);

/// Result of one case without scoring: the propagated corners and images.
CaseResult run_case(const BenchmarkCase& c, const BenchmarkSettings& settings);

/// Base plane, box, cylinder, sphere cluster and cloth, corrected, with the
/// given depth noise model.
std::vector<BenchmarkCase> standard_suite(const DepthNoiseModel& noise);

}  // namespace air
