#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "air/calibration.hpp"
#include "air/error.hpp"
#include "air/evaluation.hpp"
#include "air/rig.hpp"
#include "air/scene.hpp"
#include "air/simulation.hpp"
#include "air/upr.hpp"
#include "air/warp.hpp"

namespace air::io {

using nlohmann::json;

inline constexpr const char* kSceneSchema = "air.scene/1";
inline constexpr const char* kRigSchema = "air.rig/1";
inline constexpr const char* kSessionSchema = "air.calibration_session/1";
inline constexpr const char* kResultSchema = "air.calibration_result/1";
inline constexpr const char* kConfigSchema = "air.config/1";
inline constexpr const char* kReportSchema = "air.benchmark_report/1";

// Poses are {"translation": [m], "axis": [unit], "angle_deg": deg}.
json pose_to_json(const RigidTransform& t);
RigidTransform pose_from_json(const json& j);

json device_to_json(const PinholeDevice& d);
PinholeDevice device_from_json(const json& j);

json scene_to_json(const Scene& scene);
/// `base_dir` resolves relative paths; a {"standard": "<variant>"} document
/// expands to the built-in scene.
Scene scene_from_json(const json& j);

json rig_to_json(const RigModel& rig);
RigModel rig_from_json(const json& j);

json session_to_json(const CalibrationSession& session);
CalibrationSession session_from_json(const json& j);

json result_to_json(const CalibrationResult& result);
CalibrationResult result_from_json(const json& j);

json report_to_json(const BenchmarkReport& report);

/// Reads and parses a JSON file. Throws io when unreadable and schema on a
/// parse error (message carries line and column).
json read_json(const std::filesystem::path& path);
/// Writes with two-space indentation and a trailing newline.
void write_json(const json& j, const std::filesystem::path& path);
void write_text(const std::string& text, const std::filesystem::path& path);

/// Wraps a converter so schema problems name the file they came from.
template <typename F>
auto load(const std::filesystem::path& path, F&& convert) {
  const json j = read_json(path);
  try {
    return convert(j);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::schema, path.string() + ": " + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::schema || e.code() == ErrorCode::invalid_argument) {
      throw Error(ErrorCode::schema, path.string() + ": " + e.what());
    }
    throw;
  }
}

Scene load_scene(const std::filesystem::path& path);
RigModel load_rig(const std::filesystem::path& path);
CalibrationSession load_session(const std::filesystem::path& path);
CalibrationResult load_result(const std::filesystem::path& path);

/// Run configuration shared by every CLI command. Angles are degrees and
/// lengths meters in the file; the struct holds radians.
struct SessionConfig {
  std::filesystem::path source;  // config file, empty for defaults
  std::optional<std::filesystem::path> scene_path;
  std::optional<SceneVariant> scene_variant;
  std::optional<std::filesystem::path> rig_path;
  std::optional<std::filesystem::path> calibration_path;
  std::optional<std::filesystem::path> framebuffer_path;
  EyePose eye;
  PanTiltState state;
  Viewport viewport;
  json content = json{{"type", "checker"}};
  DepthNoiseModel depth_noise = DepthNoiseModel::ideal();
  double corner_sigma = 0.0;
  double depth_sigma = 0.0;
  double max_depth_jump = kDefaultDiscontinuity;
  bool correction = true;
  bool render_images = false;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "air_out";
  json suite = json::array();
};

SessionConfig default_config();
SessionConfig load_config(const std::filesystem::path& path);
json config_to_json(const SessionConfig& config);

/// Scene named by the config (file or built-in variant); the base plane when
/// neither is set.
Scene config_scene(const SessionConfig& config);
/// Ground-truth rig (file or built-in default).
RigModel config_rig(const SessionConfig& config);
/// Content description from the config; panorama paths resolve against the
/// config file's directory.
Content config_content(const SessionConfig& config);
/// Benchmark cases from the config, or the standard suite plus the oblique
/// plane with and without correction when the config lists none.
std::vector<BenchmarkCase> config_suite(const SessionConfig& config);

}  // namespace air::io
