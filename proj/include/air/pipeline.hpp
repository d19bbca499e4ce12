#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "air/io.hpp"

namespace air {

/// Command-line style overrides applied on top of a loaded config.
struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> output_dir;
  std::optional<EyePose> eye;
  std::optional<double> pan_deg;
  std::optional<double> tilt_deg;
  bool no_correction = false;
};

io::SessionConfig resolve_config(const std::optional<std::filesystem::path>& config_path,
                                 const ConfigOverrides& overrides);

/// Files written by a command, relative to the output directory, sorted.
struct CommandOutput {
  std::filesystem::path directory;
  std::vector<std::string> files;
  std::string summary;  // human-readable text also printed by the CLI
};

struct ImageOptions {
  bool png = false;  // also write PNG next to each PPM
};

CommandOutput cmd_simulate_calib(const io::SessionConfig& config);

/// `ground_truth` overrides the truth stored in the session, if any.
CommandOutput cmd_calibrate(const io::SessionConfig& config,
                            const std::filesystem::path& session_path,
                            const std::optional<std::filesystem::path>& ground_truth = {});

CommandOutput cmd_correct(const io::SessionConfig& config, const ImageOptions& images = {});

CommandOutput cmd_evaluate(const io::SessionConfig& config, const ImageOptions& images = {});

CommandOutput cmd_render_user_view(const io::SessionConfig& config,
                                   const ImageOptions& images = {});

/// Everything the warp needs for one configuration: ground truth, the model
/// the warp believes, and the derived UPR and emitters.
struct CorrectionSetup {
  Scene scene;
  RigModel truth;
  RigModel model;
  RigPose true_pose;
  RigPose model_pose;
  UprMatrix upr;
  UprMatrix true_upr;
  Viewport viewport;
  Content content;
  Emitter model_projector;
  Emitter true_projector;
};

CorrectionSetup make_setup(const io::SessionConfig& config);

struct CorrectionImages {
  RasterImage pass1;
  RasterImage framebuffer;
  std::size_t depth_valid_pixels = 0;
  WorldGeometry geometry;
};

CorrectionImages run_correction(const CorrectionSetup& setup, const io::SessionConfig& config);

}  // namespace air
