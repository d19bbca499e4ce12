#include "air/io.hpp"

#include <fstream>
#include <sstream>

namespace air::io {

namespace {

const json& required(const json& j, const char* key) {
  if (!j.is_object()) throw Error(ErrorCode::schema, std::string("expected an object holding '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorCode::schema, std::string("missing key '") + key + "'");
  return *it;
}

template <typename T>
T value_or(const json& j, const char* key, T fallback) {
  const auto it = j.find(key);
  return it == j.end() ? fallback : it->get<T>();
}

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }
json vec(const Vec2& v) { return json::array({v.x(), v.y()}); }

Vec3 vec3(const json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::schema, "expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Vec2 vec2(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::schema, "expected a 2-vector");
  return {j[0].get<double>(), j[1].get<double>()};
}


Rgb rgb_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::schema, "expected an RGB triple");
  Rgb c;
  for (int k = 0; k < 3; ++k) c[k] = j[k].get<std::uint8_t>();
  return c;
}

void check_schema(const json& j, const char* schema) {
  const auto it = j.find("schema");
  if (it != j.end() && it->get<std::string>() != schema) {
    throw Error(ErrorCode::schema, "expected schema '" + std::string(schema) + "', got '" +
                                       it->get<std::string>() + "'");
  }
}

json state_to_json(const PanTiltState& s) {
  return {{"pan_deg", rad2deg(s.alpha)}, {"tilt_deg", rad2deg(s.beta)}};
}

PanTiltState state_from_json(const json& j) {
  return {deg2rad(value_or(j, "pan_deg", 0.0)), deg2rad(value_or(j, "tilt_deg", 0.0))};
}

json corners_to_json(const std::vector<CornerObservation>& corners) {
  json arr = json::array();
  for (const auto& c : corners) arr.push_back({{"index", c.index}, {"point", vec(c.point)}});
  return arr;
}

std::vector<CornerObservation> corners_from_json(const json& j) {
  std::vector<CornerObservation> out;
  for (const auto& c : j) out.push_back({required(c, "index").get<int>(), vec3(required(c, "point"))});
  return out;
}

json axis_set_to_json(const AxisObservationSet& s) {
  json records = json::array();
  for (const auto& r : s.records) {
    records.push_back({{"theta_deg", rad2deg(r.theta)}, {"corners", corners_to_json(r.corners)}});
  }
  return {{"axis", std::string(to_string(s.which))}, {"records", records}};
}

AxisObservationSet axis_set_from_json(const json& j, MotorAxis which) {
  AxisObservationSet s;
  s.which = which;
  for (const auto& r : required(j, "records")) {
    s.records.push_back({deg2rad(required(r, "theta_deg").get<double>()),
                         corners_from_json(required(r, "corners"))});
  }
  return s;
}

json mesh_to_json(const TriangleMesh& m) {
  json v = json::array();
  for (const auto& p : m.vertices) v.push_back(vec(p));
  json f = json::array();
  for (const auto& t : m.faces) f.push_back({t[0], t[1], t[2]});
  return {{"vertices", v}, {"faces", f}};
}

TriangleMesh mesh_from_json(const json& j) {
  TriangleMesh m;
  for (const auto& v : required(j, "vertices")) m.vertices.push_back(vec3(v));
  for (const auto& f : required(j, "faces")) {
    if (!f.is_array() || f.size() != 3) throw Error(ErrorCode::schema, "faces must be index triples");
    m.faces.push_back({f[0].get<int>(), f[1].get<int>(), f[2].get<int>()});
  }
  m.validate();
  return m;
}

}  // namespace

json pose_to_json(const RigidTransform& t) {
  const Eigen::AngleAxisd aa(t.rotation);
  Vec3 axis = aa.axis();
  double angle = aa.angle();
  if (angle == 0.0) axis = Vec3::UnitZ();
  return {{"translation", vec(t.translation)}, {"axis", vec(axis)}, {"angle_deg", rad2deg(angle)}};
}

RigidTransform pose_from_json(const json& j) {
  RigidTransform t;
  if (j.contains("translation")) t.translation = vec3(j["translation"]);
  const double angle = deg2rad(value_or(j, "angle_deg", 0.0));
  if (j.contains("axis")) {
    t.rotation = rotation_about_axis(UnitAxis::from(vec3(j["axis"])), angle);
  } else if (angle != 0.0) {
    throw Error(ErrorCode::schema, "pose has an angle but no axis");
  }
  return t;
}

json device_to_json(const PinholeDevice& d) {
  return {{"fx", d.fx}, {"fy", d.fy}, {"cx", d.cx}, {"cy", d.cy},
          {"skew", d.skew}, {"width", d.width}, {"height", d.height}};
}

PinholeDevice device_from_json(const json& j) {
  PinholeDevice d;
  d.fx = required(j, "fx").get<double>();
  d.fy = required(j, "fy").get<double>();
  d.cx = required(j, "cx").get<double>();
  d.cy = required(j, "cy").get<double>();
  d.skew = value_or(j, "skew", 0.0);
  d.width = required(j, "width").get<int>();
  d.height = required(j, "height").get<int>();
  d.validate();
  return d;
}

json scene_to_json(const Scene& scene) {
  json surfaces = json::array();
  for (const auto& s : scene.surfaces()) {
    json js = {{"id", s.id}, {"albedo", vec(s.albedo)}};
    std::visit(
        [&](const auto& shape) {
          using T = std::decay_t<decltype(shape)>;
          if constexpr (std::is_same_v<T, PlaneShape>) {
            js["type"] = "plane";
            js["point"] = vec(shape.point);
            js["normal"] = vec(shape.normal);
            js["half_extent"] = vec(shape.half_extent);
          } else if constexpr (std::is_same_v<T, BoxShape>) {
            js["type"] = "box";
            js["pose"] = pose_to_json(shape.pose);
            js["dimensions"] = vec(shape.dimensions);
          } else if constexpr (std::is_same_v<T, SphereShape>) {
            js["type"] = "sphere";
            js["center"] = vec(shape.center);
            js["radius"] = shape.radius;
          } else if constexpr (std::is_same_v<T, CylinderShape>) {
            js["type"] = "cylinder";
            js["pose"] = pose_to_json(shape.pose);
            js["radius"] = shape.radius;
            js["height"] = shape.height;
          } else {
            js["type"] = "mesh";
            js.update(mesh_to_json(shape.bvh->mesh()));
          }
        },
        s.shape);
    surfaces.push_back(js);
  }
  json boards = json::array();
  for (const auto& t : scene.targets()) {
    boards.push_back({{"pose", pose_to_json(t.pose)}, {"rows", t.rows}, {"cols", t.cols},
                      {"square_size", t.square_size}});
  }
  return {{"schema", kSceneSchema}, {"surfaces", surfaces}, {"checkerboards", boards}};
}

Scene scene_from_json(const json& j) {
  check_schema(j, kSceneSchema);
  if (j.contains("standard")) {
    const auto name = j["standard"].get<std::string>();
    const auto variant = scene_variant_from_string(name);
    if (!variant) throw Error(ErrorCode::schema, "unknown standard scene '" + name + "'");
    return standard_scene(*variant);
  }
  std::vector<Surface> surfaces;
  int next_id = 0;
  for (const auto& js : required(j, "surfaces")) {
    Surface s;
    s.id = value_or(js, "id", next_id);
    next_id = s.id + 1;
    if (js.contains("albedo")) s.albedo = vec3(js["albedo"]);
    const auto type = required(js, "type").get<std::string>();
    if (type == "plane") {
      s.shape = PlaneShape{vec3(required(js, "point")), vec3(required(js, "normal")).normalized(),
                           js.contains("half_extent") ? vec2(js["half_extent"]) : Vec2::Zero()};
    } else if (type == "box") {
      s.shape = BoxShape{pose_from_json(required(js, "pose")), vec3(required(js, "dimensions"))};
    } else if (type == "sphere") {
      s.shape = SphereShape{vec3(required(js, "center")), required(js, "radius").get<double>()};
    } else if (type == "cylinder") {
      s.shape = CylinderShape{pose_from_json(required(js, "pose")), required(js, "radius").get<double>(),
                              required(js, "height").get<double>()};
    } else if (type == "mesh") {
      TriangleMesh m = mesh_from_json(js);
      if (js.contains("pose")) m = transformed(m, pose_from_json(js["pose"]));
      s.shape = make_mesh_shape(std::move(m));
    } else {
      throw Error(ErrorCode::schema, "unknown surface type '" + type + "'");
    }
    surfaces.push_back(std::move(s));
  }
  std::vector<CheckerboardTarget> boards;
  if (j.contains("checkerboards")) {
    for (const auto& jb : j["checkerboards"]) {
      CheckerboardTarget t;
      t.pose = pose_from_json(required(jb, "pose"));
      t.rows = required(jb, "rows").get<int>();
      t.cols = required(jb, "cols").get<int>();
      t.square_size = required(jb, "square_size").get<double>();
      boards.push_back(t);
    }
  }
  return Scene(std::move(surfaces), std::move(boards));
}

json rig_to_json(const RigModel& rig) {
  return {{"schema", kRigSchema},
          {"pan_axis", vec(rig.pan_axis.direction())},
          {"tilt_axis", vec(rig.tilt_axis.direction())},
          {"rear_to_front", pose_to_json(rig.rear_to_front)},
          {"front_to_proj", pose_to_json(rig.front_to_proj)},
          {"front_device", device_to_json(rig.front_device)},
          {"rear_device", device_to_json(rig.rear_device)},
          {"proj_device", device_to_json(rig.proj_device)},
          {"limits_deg",
           {{"pan", {rad2deg(rig.limits.pan_min), rad2deg(rig.limits.pan_max)}},
            {"tilt", {rad2deg(rig.limits.tilt_min), rad2deg(rig.limits.tilt_max)}}}}};
}

RigModel rig_from_json(const json& j) {
  check_schema(j, kRigSchema);
  RigModel rig;
  rig.pan_axis = UnitAxis::from(vec3(required(j, "pan_axis")));
  rig.tilt_axis = UnitAxis::from(vec3(required(j, "tilt_axis")));
  rig.rear_to_front = pose_from_json(required(j, "rear_to_front"));
  rig.front_to_proj = pose_from_json(required(j, "front_to_proj"));
  rig.front_device = device_from_json(required(j, "front_device"));
  rig.rear_device = device_from_json(required(j, "rear_device"));
  rig.proj_device = device_from_json(required(j, "proj_device"));
  if (j.contains("limits_deg")) {
    const auto& l = j["limits_deg"];
    const Vec2 pan = vec2(required(l, "pan"));
    const Vec2 tilt = vec2(required(l, "tilt"));
    rig.limits = {deg2rad(pan.x()), deg2rad(pan.y()), deg2rad(tilt.x()), deg2rad(tilt.y())};
  }
  return rig;
}

json session_to_json(const CalibrationSession& s) {
  json proj_records = json::array();
  for (const auto& r : s.projector.records) {
    proj_records.push_back({{"pixel", vec(r.pixel)}, {"point", vec(r.point)}, {"plane_id", r.plane_id}});
  }
  json j = {{"schema", kSessionSchema},
            {"front_device", device_to_json(s.front_device)},
            {"rear_device", device_to_json(s.rear_device)},
            {"pan", axis_set_to_json(s.pan)},
            {"tilt", axis_set_to_json(s.tilt)},
            {"rear",
             {{"front_state", state_to_json(s.rear.front_state)},
              {"front_corners", corners_to_json(s.rear.front_corners)},
              {"rear_state", state_to_json(s.rear.rear_state)},
              {"rear_corners", corners_to_json(s.rear.rear_corners)}}},
            {"projector",
             {{"width", s.projector.width}, {"height", s.projector.height}, {"records", proj_records}}}};
  if (s.ground_truth) j["ground_truth"] = rig_to_json(*s.ground_truth);
  return j;
}

CalibrationSession session_from_json(const json& j) {
  check_schema(j, kSessionSchema);
  CalibrationSession s;
  s.front_device = device_from_json(required(j, "front_device"));
  s.rear_device = device_from_json(required(j, "rear_device"));
  s.pan = axis_set_from_json(required(j, "pan"), MotorAxis::pan);
  s.tilt = axis_set_from_json(required(j, "tilt"), MotorAxis::tilt);
  const auto& rear = required(j, "rear");
  s.rear.front_state = state_from_json(required(rear, "front_state"));
  s.rear.front_corners = corners_from_json(required(rear, "front_corners"));
  s.rear.rear_state = state_from_json(required(rear, "rear_state"));
  s.rear.rear_corners = corners_from_json(required(rear, "rear_corners"));
  const auto& proj = required(j, "projector");
  s.projector.width = required(proj, "width").get<int>();
  s.projector.height = required(proj, "height").get<int>();
  for (const auto& r : required(proj, "records")) {
    s.projector.records.push_back(
        {vec2(required(r, "pixel")), vec3(required(r, "point")), value_or(r, "plane_id", 0)});
  }
  if (j.contains("ground_truth")) s.ground_truth = rig_from_json(j["ground_truth"]);
  return s;
}

json result_to_json(const CalibrationResult& r) {
  json j = {{"schema", kResultSchema},
            {"pan_axis", vec(r.pan_axis.direction())},
            {"tilt_axis", vec(r.tilt_axis.direction())},
            {"rear_to_front", pose_to_json(r.rear_to_front)},
            {"proj_intrinsics", device_to_json(r.proj_intrinsics)},
            {"front_to_proj", pose_to_json(r.front_to_proj)},
            {"residuals",
             {{"pan_axis_rms_m", r.residuals.pan_axis_rms_m},
              {"tilt_axis_rms_m", r.residuals.tilt_axis_rms_m},
              {"axis_rms_m", r.residuals.axis_rms_m},
              {"rear_rms_m", r.residuals.rear_rms_m},
              {"proj_reproj_rms_px", r.residuals.proj_reproj_rms_px},
              {"proj_dlt_rms_px", r.residuals.proj_dlt_rms_px}}}};
  if (r.errors) {
    const auto& e = *r.errors;
    j["errors"] = {{"pan_axis_rad", e.pan_axis_rad},
                   {"tilt_axis_rad", e.tilt_axis_rad},
                   {"rear_rotation_rad", e.rear_rotation_rad},
                   {"rear_translation_m", e.rear_translation_m},
                   {"proj_focal_rel", e.proj_focal_rel},
                   {"proj_principal_px", e.proj_principal_px},
                   {"proj_rotation_rad", e.proj_rotation_rad},
                   {"proj_translation_m", e.proj_translation_m}};
  }
  return j;
}

CalibrationResult result_from_json(const json& j) {
  check_schema(j, kResultSchema);
  CalibrationResult r;
  r.pan_axis = UnitAxis::from(vec3(required(j, "pan_axis")));
  r.tilt_axis = UnitAxis::from(vec3(required(j, "tilt_axis")));
  r.rear_to_front = pose_from_json(required(j, "rear_to_front"));
  r.proj_intrinsics = device_from_json(required(j, "proj_intrinsics"));
  r.front_to_proj = pose_from_json(required(j, "front_to_proj"));
  const auto& res = required(j, "residuals");
  r.residuals.pan_axis_rms_m = value_or(res, "pan_axis_rms_m", 0.0);
  r.residuals.tilt_axis_rms_m = value_or(res, "tilt_axis_rms_m", 0.0);
  r.residuals.axis_rms_m = value_or(res, "axis_rms_m", 0.0);
  r.residuals.rear_rms_m = value_or(res, "rear_rms_m", 0.0);
  r.residuals.proj_reproj_rms_px = value_or(res, "proj_reproj_rms_px", 0.0);
  r.residuals.proj_dlt_rms_px = value_or(res, "proj_dlt_rms_px", 0.0);
  if (j.contains("errors")) {
    const auto& e = j["errors"];
    CalibrationErrors ce;
    ce.pan_axis_rad = value_or(e, "pan_axis_rad", 0.0);
    ce.tilt_axis_rad = value_or(e, "tilt_axis_rad", 0.0);
    ce.rear_rotation_rad = value_or(e, "rear_rotation_rad", 0.0);
    ce.rear_translation_m = value_or(e, "rear_translation_m", 0.0);
    ce.proj_focal_rel = value_or(e, "proj_focal_rel", 0.0);
    ce.proj_principal_px = value_or(e, "proj_principal_px", 0.0);
    ce.proj_rotation_rad = value_or(e, "proj_rotation_rad", 0.0);
    ce.proj_translation_m = value_or(e, "proj_translation_m", 0.0);
    r.errors = ce;
  }
  return r;
}

json report_to_json(const BenchmarkReport& report) {
  json cases = json::array();
  for (const auto& c : report.cases) {
    json jc = {{"name", c.name},
               {"scene", std::string(to_string(c.variant))},
               {"correction", c.correction == Correction::on},
               {"ok", c.ok}};
    if (!c.ok) {
      jc["error"] = c.error;
    } else {
      jc["mean_dislocation_px"] = c.mean_dislocation_px;
      jc["resolved"] = c.resolved;
      jc["unresolved"] = c.unresolved;
      jc["depth_valid_pixels"] = c.depth_valid_pixels;
      json per = json::array();
      for (const auto& [idx, d] : c.per_corner) per.push_back({{"index", idx}, {"error_px", d}});
      jc["per_corner"] = per;
    }
    cases.push_back(jc);
  }
  return {{"schema", kReportSchema}, {"cases", cases}};
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::schema, path.string() + ": " + e.what());
  }
}

void write_json(const json& j, const std::filesystem::path& path) {
  write_text(j.dump(2) + "\n", path);
}

void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorCode::io, "failed writing " + path.string());
}

Scene load_scene(const std::filesystem::path& path) { return load(path, scene_from_json); }
RigModel load_rig(const std::filesystem::path& path) { return load(path, rig_from_json); }
CalibrationSession load_session(const std::filesystem::path& path) {
  return load(path, session_from_json);
}
CalibrationResult load_result(const std::filesystem::path& path) { return load(path, result_from_json); }

SessionConfig default_config() { return {}; }

namespace {

DepthNoiseModel noise_from_json(const json& j, std::uint64_t seed) {
  DepthNoiseModel n;
  n.sigma = value_or(j, "sigma", 0.0);
  n.gamma_full_dropout = value_or(j, "gamma_full_dropout_deg", 10.0);
  n.gamma_no_dropout = value_or(j, "gamma_no_dropout_deg", 30.0);
  n.dropout = value_or(j, "dropout", true);
  n.seed = seed;
  n.validate();
  return n;
}

json noise_to_json(const DepthNoiseModel& n) {
  return {{"sigma", n.sigma},
          {"gamma_full_dropout_deg", n.gamma_full_dropout},
          {"gamma_no_dropout_deg", n.gamma_no_dropout},
          {"dropout", n.dropout}};
}

std::filesystem::path resolve(const SessionConfig& c, const std::string& p) {
  const std::filesystem::path path(p);
  if (path.is_absolute() || c.source.empty()) return path;
  return c.source.parent_path() / path;
}

}  // namespace

SessionConfig load_config(const std::filesystem::path& path) {
  return load(path, [&](const json& j) {
    check_schema(j, kConfigSchema);
    SessionConfig c;
    c.source = path;
    c.seed = value_or<std::uint64_t>(j, "seed", 0);
    if (j.contains("scene")) {
      const auto& s = j["scene"];
      if (s.is_string()) {
        const auto name = s.get<std::string>();
        if (const auto v = scene_variant_from_string(name)) {
          c.scene_variant = v;
        } else {
          c.scene_path = resolve(c, name);
        }
      } else {
        throw Error(ErrorCode::schema, "'scene' must be a path or a built-in scene name");
      }
    }
    if (j.contains("rig")) c.rig_path = resolve(c, j["rig"].get<std::string>());
    if (j.contains("calibration")) c.calibration_path = resolve(c, j["calibration"].get<std::string>());
    if (j.contains("framebuffer")) c.framebuffer_path = resolve(c, j["framebuffer"].get<std::string>());
    if (j.contains("eye")) {
      const Vec3 e = vec3(j["eye"]);
      c.eye = {e.x(), e.y(), e.z()};
    }
    if (j.contains("state")) c.state = state_from_json(j["state"]);
    if (j.contains("viewport")) {
      const auto& v = j["viewport"];
      c.viewport.width_m = value_or(v, "width_m", c.viewport.width_m);
      c.viewport.height_m = value_or(v, "height_m", c.viewport.height_m);
      c.viewport.width_px = value_or(v, "width_px", c.viewport.width_px);
      c.viewport.height_px = value_or(v, "height_px", c.viewport.height_px);
    }
    c.viewport.mirror_x = c.eye.z > 0.0;
    if (j.contains("content")) c.content = j["content"];
    if (j.contains("depth_noise")) c.depth_noise = noise_from_json(j["depth_noise"], c.seed);
    c.depth_noise.seed = c.seed;
    if (j.contains("calibration_noise")) {
      c.corner_sigma = value_or(j["calibration_noise"], "corner_sigma", 0.0);
      c.depth_sigma = value_or(j["calibration_noise"], "depth_sigma", 0.0);
    }
    c.max_depth_jump = value_or(j, "max_depth_jump", kDefaultDiscontinuity);
    c.correction = value_or(j, "correction", true);
    c.render_images = value_or(j, "render_images", false);
    if (j.contains("output_dir")) c.output_dir = resolve(c, j["output_dir"].get<std::string>());
    if (j.contains("suite")) c.suite = j["suite"];
    return c;
  });
}

json config_to_json(const SessionConfig& c) {
  json j = {{"schema", kConfigSchema},
            {"seed", c.seed},
            {"eye", vec(c.eye.position())},
            {"state", state_to_json(c.state)},
            {"viewport",
             {{"width_m", c.viewport.width_m},
              {"height_m", c.viewport.height_m},
              {"width_px", c.viewport.width_px},
              {"height_px", c.viewport.height_px}}},
            {"content", c.content},
            {"depth_noise", noise_to_json(c.depth_noise)},
            {"calibration_noise", {{"corner_sigma", c.corner_sigma}, {"depth_sigma", c.depth_sigma}}},
            {"max_depth_jump", c.max_depth_jump},
            {"correction", c.correction},
            {"render_images", c.render_images},
            {"output_dir", c.output_dir.string()},
            {"suite", c.suite}};
  if (c.scene_variant) j["scene"] = std::string(to_string(*c.scene_variant));
  if (c.scene_path) j["scene"] = c.scene_path->string();
  if (c.rig_path) j["rig"] = c.rig_path->string();
  if (c.calibration_path) j["calibration"] = c.calibration_path->string();
  if (c.framebuffer_path) j["framebuffer"] = c.framebuffer_path->string();
  return j;
}

Scene config_scene(const SessionConfig& c) {
  if (c.scene_path) return load_scene(*c.scene_path);
  return standard_scene(c.scene_variant.value_or(SceneVariant::base_plane));
}

RigModel config_rig(const SessionConfig& c) {
  return c.rig_path ? load_rig(*c.rig_path) : default_rig();
}

Content config_content(const SessionConfig& c) {
  const json& j = c.content;
  const auto type = value_or<std::string>(j, "type", "checker");
  if (type == "checker") {
    CheckerPattern p;
    p.rows = value_or(j, "rows", p.rows);
    p.cols = value_or(j, "cols", p.cols);
    p.square_px = value_or(j, "square_px", p.square_px);
    if (p.rows < 2 || p.cols < 2 || p.square_px < 1) {
      throw Error(ErrorCode::schema, "checker content needs rows, cols >= 2 and square_px >= 1");
    }
    return p;
  }
  if (type == "equirect") {
    return EquirectContent{read_ppm(resolve(c, required(j, "image").get<std::string>()))};
  }
  if (type == "meshes") {
    MeshSetContent m;
    if (j.contains("background")) m.background = rgb_from(j["background"]);
    for (const auto& jm : required(j, "meshes")) {
      ColoredMesh cm;
      cm.mesh = mesh_from_json(jm);
      if (jm.contains("pose")) cm.mesh = transformed(cm.mesh, pose_from_json(jm["pose"]));
      if (jm.contains("color")) cm.color = rgb_from(jm["color"]);
      m.meshes.push_back(std::move(cm));
    }
    return m;
  }
  throw Error(ErrorCode::schema, "unknown content type '" + type + "'");
}

std::vector<BenchmarkCase> config_suite(const SessionConfig& c) {
  std::vector<BenchmarkCase> suite;
  if (c.suite.empty()) {
    suite = standard_suite(c.depth_noise);
    for (const auto corr : {Correction::on, Correction::off}) {
      BenchmarkCase o;
      o.name = corr == Correction::on ? "oblique_plane" : "oblique_plane_uncorrected";
      o.variant = SceneVariant::oblique_plane;
      o.correction = corr;
      o.noise = c.depth_noise;
      suite.push_back(o);
    }
    return suite;
  }
  for (const auto& jc : c.suite) {
    BenchmarkCase bc;
    const auto scene = required(jc, "scene").get<std::string>();
    const auto v = scene_variant_from_string(scene);
    if (!v) throw Error(ErrorCode::schema, "unknown scene '" + scene + "' in suite");
    bc.variant = *v;
    bc.name = value_or(jc, "name", scene);
    bc.correction = value_or(jc, "correction", true) ? Correction::on : Correction::off;
    bc.geometry = value_or<std::string>(jc, "geometry", "sensed") == "noiseless" ? GeometrySource::noiseless
                                                                                 : GeometrySource::sensed;
    bc.noise = jc.contains("depth_noise") ? noise_from_json(jc["depth_noise"], c.seed) : c.depth_noise;
    suite.push_back(bc);
  }
  return suite;
}

}  // namespace air::io
