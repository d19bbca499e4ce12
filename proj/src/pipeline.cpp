#include "air/pipeline.hpp"

#include <algorithm>
#include <sstream>

namespace air {

namespace fs = std::filesystem;

namespace {

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorCode::io, "cannot create output directory " + dir.string());
  }
}

// The echoed config omits the output directory so reruns into different
// directories produce identical files.
void echo_config(const io::SessionConfig& config, CommandOutput& out) {
  io::json j = io::config_to_json(config);
  j.erase("output_dir");
  io::write_json(j, out.directory / "config.json");
  out.files.push_back("config.json");
}

void write_image(const RasterImage& image, const std::string& stem, const ImageOptions& opts,
                 CommandOutput& out) {
  write_ppm(image, out.directory / (stem + ".ppm"));
  out.files.push_back(stem + ".ppm");
  if (opts.png) {
    write_png(image, out.directory / (stem + ".png"));
    out.files.push_back(stem + ".png");
  }
}

CommandOutput start(const io::SessionConfig& config) {
  CommandOutput out;
  out.directory = config.output_dir;
  prepare_dir(out.directory);
  return out;
}

void finish(CommandOutput& out) { std::sort(out.files.begin(), out.files.end()); }

std::string fixed(double v, int digits = 6) {
  std::ostringstream s;
  s.setf(std::ios::scientific);
  s.precision(digits);
  s << v;
  return s.str();
}

RigModel model_rig(const io::SessionConfig& config, const RigModel& truth) {
  if (!config.calibration_path) return truth;
  RigModel m = io::load_result(*config.calibration_path).to_rig(truth.front_device, truth.rear_device);
  m.limits = truth.limits;
  return m;
}

CheckerPattern pattern_of(const Content& content) {
  if (const auto* p = std::get_if<CheckerPattern>(&content)) return *p;
  return {};
}

}  // namespace

io::SessionConfig resolve_config(const std::optional<fs::path>& config_path,
                                 const ConfigOverrides& o) {
  io::SessionConfig c = config_path ? io::load_config(*config_path) : io::default_config();
  if (o.seed) {
    c.seed = *o.seed;
    c.depth_noise.seed = *o.seed;
  }
  if (o.output_dir) c.output_dir = *o.output_dir;
  if (o.eye) {
    if (o.eye->z == 0.0) throw Error(ErrorCode::eye_on_screen_plane, "--eye needs a non-zero z");
    c.eye = *o.eye;
    c.viewport.mirror_x = c.eye.z > 0.0;
  }
  if (o.pan_deg) c.state.alpha = deg2rad(*o.pan_deg);
  if (o.tilt_deg) c.state.beta = deg2rad(*o.tilt_deg);
  if (o.no_correction) c.correction = false;
  return c;
}

CommandOutput cmd_simulate_calib(const io::SessionConfig& config) {
  const RigModel truth = io::config_rig(config);
  CalibrationProtocol protocol = default_protocol();
  protocol.seed = config.seed;
  protocol.corner_sigma = config.corner_sigma;
  protocol.depth_sigma = config.depth_sigma;
  if (config.scene_path) {
    const Scene scene = io::load_scene(*config.scene_path);
    if (!scene.targets().empty()) protocol.axis_board = scene.targets()[0];
    if (scene.targets().size() > 1) protocol.rear_board = scene.targets()[1];
  }
  const CalibrationSession session = simulate_calibration_session(truth, protocol);

  CommandOutput out = start(config);
  echo_config(config, out);
  io::write_json(io::session_to_json(session), out.directory / "session.json");
  out.files.push_back("session.json");
  std::ostringstream s;
  s << "pan records " << session.pan.records.size() << ", tilt records "
    << session.tilt.records.size() << ", projector correspondences "
    << session.projector.records.size() << "\n";
  out.summary = s.str();
  finish(out);
  return out;
}

CommandOutput cmd_calibrate(const io::SessionConfig& config, const fs::path& session_path,
                            const std::optional<fs::path>& ground_truth) {
  CalibrationSession session = io::load_session(session_path);
  if (ground_truth) session.ground_truth = io::load_rig(*ground_truth);
  const CalibrationResult result = run_full_calibration(session);

  CommandOutput out = start(config);
  io::write_json(io::session_to_json(session), out.directory / "session_input.json");
  out.files.push_back("session_input.json");
  io::write_json(io::result_to_json(result), out.directory / "calibration.json");
  out.files.push_back("calibration.json");

  std::ostringstream t;
  const auto& r = result.residuals;
  t << "quantity                value\n";
  t << "pan_axis_rms_m          " << fixed(r.pan_axis_rms_m) << "\n";
  t << "tilt_axis_rms_m         " << fixed(r.tilt_axis_rms_m) << "\n";
  t << "rear_rms_m              " << fixed(r.rear_rms_m) << "\n";
  t << "proj_dlt_rms_px         " << fixed(r.proj_dlt_rms_px) << "\n";
  t << "proj_reproj_rms_px      " << fixed(r.proj_reproj_rms_px) << "\n";
  if (result.errors) {
    const auto& e = *result.errors;
    t << "err_pan_axis_rad        " << fixed(e.pan_axis_rad) << "\n";
    t << "err_tilt_axis_rad       " << fixed(e.tilt_axis_rad) << "\n";
    t << "err_rear_rotation_rad   " << fixed(e.rear_rotation_rad) << "\n";
    t << "err_rear_translation_m  " << fixed(e.rear_translation_m) << "\n";
    t << "err_proj_focal_rel      " << fixed(e.proj_focal_rel) << "\n";
    t << "err_proj_principal_px   " << fixed(e.proj_principal_px) << "\n";
    t << "err_proj_rotation_rad   " << fixed(e.proj_rotation_rad) << "\n";
    t << "err_proj_translation_m  " << fixed(e.proj_translation_m) << "\n";
  }
  io::write_text(t.str(), out.directory / "residuals.txt");
  out.files.push_back("residuals.txt");
  out.summary = t.str();
  finish(out);
  return out;
}

CorrectionSetup make_setup(const io::SessionConfig& config) {
  Scene scene = io::config_scene(config);
  RigModel truth = io::config_rig(config);
  RigModel model = model_rig(config, truth);
  truth.check_state(config.state);
  const RigPose true_pose = rig_pose(truth, config.state);
  const RigPose model_pose = rig_pose(model, config.state);
  UprMatrix upr(config.eye, model_pose.rear_to_world.inverse());
  UprMatrix true_upr(config.eye, true_pose.rear_to_world.inverse());
  Emitter model_proj{model.proj_device, model_pose.proj_to_world};
  Emitter true_proj{truth.proj_device, true_pose.proj_to_world};
  return CorrectionSetup{std::move(scene), std::move(truth), std::move(model), true_pose,
                         model_pose, std::move(upr), std::move(true_upr), config.viewport,
                         io::config_content(config), model_proj, true_proj};
}

CorrectionImages run_correction(const CorrectionSetup& s, const io::SessionConfig& config) {
  CorrectionImages out;
  out.pass1 = render_user_view(s.content, s.upr, s.viewport);
  if (config.correction) {
    const DepthImage depth =
        sense_depth(s.scene, s.truth.front_device, s.true_pose.front_to_world, config.depth_noise);
    out.depth_valid_pixels = depth.valid_count();
    out.geometry = geometry_from_depth(depth, s.model.front_device, s.model_pose.front_to_world,
                                       config.max_depth_jump);
    out.framebuffer = warp_to_projector(out.geometry, s.upr, s.viewport, out.pass1, s.model_projector);
  } else {
    out.framebuffer = passthrough_to_projector(out.pass1, s.model.proj_device);
  }
  return out;
}

CommandOutput cmd_correct(const io::SessionConfig& config, const ImageOptions& images) {
  const CorrectionSetup setup = make_setup(config);
  const CorrectionImages result = run_correction(setup, config);
  CommandOutput out = start(config);
  echo_config(config, out);
  write_image(result.pass1, "pass1", images, out);
  write_image(result.framebuffer, "framebuffer", images, out);
  std::ostringstream s;
  s << "correction " << (config.correction ? "on" : "off") << ", valid depth pixels "
    << result.depth_valid_pixels << "\n";
  out.summary = s.str();
  finish(out);
  return out;
}

CommandOutput cmd_render_user_view(const io::SessionConfig& config, const ImageOptions& images) {
  const CorrectionSetup setup = make_setup(config);
  const ViewCamera viewer = matched_user_camera(setup.true_upr, setup.viewport);
  CommandOutput out = start(config);
  echo_config(config, out);

  RasterImage framebuffer;
  std::optional<CorrectionImages> corrected;
  if (config.framebuffer_path) {
    framebuffer = read_ppm(*config.framebuffer_path);
    if (framebuffer.width() != setup.truth.proj_device.width ||
        framebuffer.height() != setup.truth.proj_device.height) {
      throw Error(ErrorCode::invalid_argument, "framebuffer size does not match the projector");
    }
  } else {
    corrected = run_correction(setup, config);
    framebuffer = corrected->framebuffer;
  }
  RasterImage view = simulate_projection_and_view(setup.scene, framebuffer, setup.true_projector, viewer);
  write_image(view, "user_view", images, out);

  std::ostringstream s;
  if (corrected && std::holds_alternative<CheckerPattern>(setup.content)) {
    const auto pattern = std::get<CheckerPattern>(setup.content);
    const auto corners = pattern.inner_corners(setup.viewport.width_px, setup.viewport.height_px);
    const auto propagated =
        propagate_corners(corners, corrected->geometry, setup.upr, setup.viewport,
                          setup.model_projector, PhysicalWorld{&setup.scene, setup.true_projector},
                          viewer, config.correction ? Correction::on : Correction::off);
    io::json jc = io::json::array();
    int resolved = 0;
    double sum = 0.0;
    for (std::size_t k = 0; k < propagated.size(); ++k) {
      const auto& pc = propagated[k];
      io::json e = {{"index", pc.index}, {"target", {corners[k].second.x(), corners[k].second.y()}}};
      if (pc.pixel) {
        e["pixel"] = {pc.pixel->x(), pc.pixel->y()};
        sum += (*pc.pixel - corners[k].second).norm();
        ++resolved;
        draw_marker(view, corners[k].second, 2, {255, 0, 0});
        draw_marker(view, *pc.pixel, 1, {0, 255, 0});
      }
      jc.push_back(e);
    }
    io::write_json({{"corners", jc}}, out.directory / "corners.json");
    out.files.push_back("corners.json");
    write_image(view, "user_view_corners", images, out);
    s << "resolved corners " << resolved << "/" << propagated.size();
    if (resolved > 0) s << ", mean offset from pattern " << fixed(sum / resolved, 4) << " px";
    s << "\n";
  }
  out.summary = s.str();
  finish(out);
  return out;
}

CommandOutput cmd_evaluate(const io::SessionConfig& config, const ImageOptions& images) {
  BenchmarkSettings settings;
  settings.truth = io::config_rig(config);
  if (config.calibration_path) settings.estimate = model_rig(config, settings.truth);
  settings.eye = config.eye;
  settings.state = config.state;
  settings.viewport = config.viewport;
  settings.pattern = pattern_of(io::config_content(config));
  settings.max_depth_jump = config.max_depth_jump;
  settings.render_images = config.render_images;
  const BenchmarkReport report = run_benchmark(io::config_suite(config), settings);

  CommandOutput out = start(config);
  echo_config(config, out);
  io::write_json(io::report_to_json(report), out.directory / "report.json");
  out.files.push_back("report.json");
  out.summary = report.summary_text();
  io::write_text(out.summary, out.directory / "summary.txt");
  out.files.push_back("summary.txt");
  if (config.render_images) {
    for (const auto& c : report.cases) {
      if (!c.ok) continue;
      write_image(c.framebuffer, c.name + "_framebuffer", images, out);
      write_image(c.user_view, c.name + "_user_view", images, out);
    }
  }
  finish(out);
  return out;
}

}  // namespace air
