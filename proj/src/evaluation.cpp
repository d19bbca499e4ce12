#include "air/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "air/error.hpp"

namespace air {

CornerSet to_corner_set(const std::vector<PropagatedCorner>& propagated, int width, int height) {
  CornerSet out;
  out.width = width;
  out.height = height;
  for (const auto& c : propagated) {
    if (c.pixel) out.corners.emplace_back(c.index, *c.pixel);
  }
  return out;
}

Dislocation corner_dislocation(const CornerSet& base, const CornerSet& test) {
  auto index_map = [](const CornerSet& s, const char* which) {
    std::map<int, Vec2> m;
    for (const auto& [idx, p] : s.corners) {
      if (!p.allFinite()) {
        throw Error(ErrorCode::invalid_argument, std::string(which) + " corner is not finite");
      }
      if (!m.emplace(idx, p).second) {
        throw Error(ErrorCode::invalid_argument,
                    std::string(which) + " corner set has a duplicate index");
      }
    }
    return m;
  };
  const auto b = index_map(base, "base");
  const auto t = index_map(test, "test");
  Dislocation out;
  double sum = 0.0;
  for (const auto& [idx, p] : b) {
    const auto it = t.find(idx);
    if (it == t.end()) {
      out.unresolved.push_back(idx);
      continue;
    }
    const double d = (p - it->second).norm();
    out.per_corner.emplace_back(idx, d);
    sum += d;
  }
  for (const auto& [idx, p] : t) {
    if (!b.contains(idx)) out.unresolved.push_back(idx);
  }
  std::sort(out.unresolved.begin(), out.unresolved.end());
  if (out.per_corner.empty()) {
    throw Error(ErrorCode::empty_intersection, "corner sets share no index");
  }
  out.mean_px = sum / static_cast<double>(out.per_corner.size());
  return out;
}

namespace {

constexpr std::pair<SceneVariant, std::string_view> kVariantNames[] = {
    {SceneVariant::base_plane, "base_plane"},
    {SceneVariant::oblique_plane, "oblique_plane"},
    {SceneVariant::box, "box"},
    {SceneVariant::cylinder, "cylinder"},
    {SceneVariant::sphere_cluster, "sphere_cluster"},
    {SceneVariant::cloth, "cloth"},
    {SceneVariant::grazing_slats, "grazing_slats"},
    {SceneVariant::frontal_steps, "frontal_steps"},
};

Surface wall() {
  return {0, Vec3(0.8, 0.8, 0.8), PlaneShape{Vec3(0.0, 0.0, 2.5), Vec3(0.0, 0.0, -1.0), Vec2::Zero()}};
}

/// Vertical slats whose faces meet central sensor rays at `gamma_deg`.
TriangleMesh make_slats(double x_min, double x_max, double slat_width, double z_front,
                        double half_height, double gamma_deg) {
  TriangleMesh m;
  const double depth = slat_width / std::tan(deg2rad(gamma_deg));
  auto quad = [&](const Vec3& a, const Vec3& b) {
    // Vertical quad from edge a to edge b, spanning y in [-h, h].
    const int base = static_cast<int>(m.vertices.size());
    m.vertices.push_back(a + Vec3(0.0, -half_height, 0.0));
    m.vertices.push_back(b + Vec3(0.0, -half_height, 0.0));
    m.vertices.push_back(b + Vec3(0.0, half_height, 0.0));
    m.vertices.push_back(a + Vec3(0.0, half_height, 0.0));
    m.faces.push_back({base, base + 1, base + 2});
    m.faces.push_back({base, base + 2, base + 3});
  };
  for (double x = x_min; x + slat_width <= x_max + 1e-12; x += slat_width) {
    const Vec3 front(x, 0.0, z_front);
    const Vec3 back(x + slat_width, 0.0, z_front + depth);
    quad(front, back);
    quad(back, Vec3(x + slat_width, 0.0, z_front));
  }
  return m;
}

}  // namespace

std::string_view to_string(SceneVariant variant) {
  for (const auto& [v, name] : kVariantNames) {
    if (v == variant) return name;
  }
  return "unknown";
}

std::optional<SceneVariant> scene_variant_from_string(std::string_view name) {
  for (const auto& [v, n] : kVariantNames) {
    if (n == name) return v;
  }
  return std::nullopt;
}

Scene standard_scene(SceneVariant variant) {
  std::vector<Surface> s;
  const Vec3 grey(0.7, 0.7, 0.7);
  switch (variant) {
    case SceneVariant::base_plane:
      s.push_back(wall());
      break;
    case SceneVariant::oblique_plane:
      s.push_back({0, Vec3(0.8, 0.8, 0.8),
                   PlaneShape{Vec3(0.0, 0.0, 2.5),
                              Vec3(std::sin(deg2rad(45.0)), 0.0, -std::cos(deg2rad(45.0))),
                              Vec2::Zero()}});
      break;
    case SceneVariant::box:
      s.push_back(wall());
      s.push_back({1, grey,
                   BoxShape{{rotation_about_axis(UnitAxis::from(Vec3::UnitY()), deg2rad(25.0)),
                             Vec3(0.05, 0.0, 2.05)},
                            Vec3(0.7, 0.7, 0.4)}});
      break;
    case SceneVariant::cylinder:
      s.push_back(wall());
      s.push_back({1, grey,
                   CylinderShape{{rotation_about_axis(UnitAxis::from(Vec3::UnitX()), kPi / 2),
                                  Vec3(0.0, 0.0, 2.0)},
                                 0.35, 1.4}});
      break;
    case SceneVariant::sphere_cluster:
      s.push_back(wall());
      s.push_back({1, grey, SphereShape{Vec3(-0.4, 0.0, 2.1), 0.25}});
      s.push_back({2, grey, SphereShape{Vec3(0.35, -0.1, 2.0), 0.3}});
      s.push_back({3, grey, SphereShape{Vec3(0.0, 0.35, 2.2), 0.2}});
      break;
    case SceneVariant::cloth:
      s.push_back(wall());
      s.push_back({1, grey,
                   make_mesh_shape(make_displaced_sheet({Mat3::Identity(), Vec3(0.0, 0.0, 2.2)},
                                                        Vec2(2.0, 1.4), 80, 56, 0.06, Vec2(8.0, 5.0)))});
      break;
    case SceneVariant::grazing_slats:
      s.push_back(wall());
      s.push_back({1, grey, make_mesh_shape(make_slats(-1.2, 1.2, 0.08, 1.9, 0.9, 20.0))});
      break;
    case SceneVariant::frontal_steps:
      s.push_back(wall());
      s.push_back({1, grey, BoxShape{{Mat3::Identity(), Vec3(-0.6, 0.0, 2.1)}, Vec3(0.6, 1.8, 0.2)}});
      s.push_back({2, grey, BoxShape{{Mat3::Identity(), Vec3(0.0, 0.0, 2.25)}, Vec3(0.6, 1.8, 0.2)}});
      s.push_back({3, grey, BoxShape{{Mat3::Identity(), Vec3(0.6, 0.0, 2.0)}, Vec3(0.6, 1.8, 0.2)}});
      break;
  }
  return Scene(std::move(s));
}

const CaseResult* BenchmarkReport::find(const std::string& name) const {
  for (const auto& c : cases) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string BenchmarkReport::summary_text() const {
  std::ostringstream os;
  os << std::left << std::setw(24) << "case" << std::setw(12) << "correction" << std::right
     << std::setw(14) << "mean_px" << std::setw(10) << "resolved" << std::setw(12) << "unresolved"
     << "\n";
  for (const auto& c : cases) {
    os << std::left << std::setw(24) << c.name << std::setw(12)
       << (c.correction == Correction::on ? "on" : "off") << std::right;
    if (c.ok) {
      os << std::setw(14) << std::fixed << std::setprecision(4) << c.mean_dislocation_px
         << std::setw(10) << c.resolved << std::setw(12) << c.unresolved << "\n";
    } else {
      os << "  FAILED: " << c.error << "\n";
    }
  }
  return os.str();
}

CaseResult run_case(const BenchmarkCase& c, const BenchmarkSettings& settings) {
  CaseResult r;
  r.name = c.name;
  r.variant = c.variant;
  r.correction = c.correction;

  const Scene scene = standard_scene(c.variant);
  const RigModel& truth = settings.truth;
  const RigModel& model = settings.estimate ? *settings.estimate : truth;
  const RigPose true_pose = rig_pose(truth, settings.state);
  const RigPose model_pose = rig_pose(model, settings.state);

  const UprMatrix upr(settings.eye, model_pose.rear_to_world.inverse());
  // The physical eye: the tracked position through the true rear-camera pose.
  const UprMatrix true_upr(settings.eye, true_pose.rear_to_world.inverse());
  const ViewCamera viewer = matched_user_camera(true_upr, settings.viewport);
  const Emitter model_proj{model.proj_device, model_pose.proj_to_world};
  const Emitter true_proj{truth.proj_device, true_pose.proj_to_world};

  WorldGeometry geometry;
  if (c.correction == Correction::on || settings.render_images) {
    const DepthNoiseModel noise =
        c.geometry == GeometrySource::noiseless ? DepthNoiseModel::ideal() : c.noise;
    const DepthImage depth = sense_depth(scene, truth.front_device, true_pose.front_to_world, noise);
    r.depth_valid_pixels = depth.valid_count();
    // Lifted to world with the model's motor rotation.
    geometry = geometry_from_depth(depth, model.front_device, model_pose.front_to_world,
                                   settings.max_depth_jump);
  }

  const auto pattern_corners =
      settings.pattern.inner_corners(settings.viewport.width_px, settings.viewport.height_px);
  const auto propagated = propagate_corners(pattern_corners, geometry, upr, settings.viewport,
                                            model_proj, PhysicalWorld{&scene, true_proj}, viewer,
                                            c.correction);
  r.corners = to_corner_set(propagated, viewer.device.width, viewer.device.height);

  if (settings.render_images) {
    r.pass1 = render_user_view(settings.pattern, upr, settings.viewport);
    r.framebuffer = c.correction == Correction::on
                        ? warp_to_projector(geometry, upr, settings.viewport, r.pass1, model_proj)
                        : passthrough_to_projector(r.pass1, truth.proj_device);
    r.user_view = simulate_projection_and_view(scene, r.framebuffer, true_proj, viewer);
  }
  r.ok = true;
  return r;
}

BenchmarkReport run_benchmark(const std::vector<BenchmarkCase>& suite,
                              const BenchmarkSettings& settings) {
  if (suite.empty() || suite.front().variant != SceneVariant::base_plane) {
    throw Error(ErrorCode::invalid_argument, "benchmark suite must start with the planar base case");
  }
  BenchmarkReport report;
  std::optional<CornerSet> base;
  for (const auto& c : suite) {
    CaseResult r;
    try {
      r = run_case(c, settings);
      if (!base) {
        if (r.corners.corners.empty()) {
          throw Error(ErrorCode::empty_intersection, "base case resolved no corners");
        }
      }
      const CornerSet& reference = base ? *base : r.corners;
      const Dislocation d = corner_dislocation(reference, r.corners);
      r.mean_dislocation_px = d.mean_px;
      r.per_corner = d.per_corner;
      r.resolved = static_cast<int>(d.per_corner.size());
      r.unresolved = static_cast<int>(settings.pattern.inner_corners(settings.viewport.width_px,
                                                                     settings.viewport.height_px)
                                          .size()) -
                     r.resolved;
      if (settings.render_images) {
        for (const auto& [idx, p] : reference.corners) draw_marker(r.user_view, p, 2, {255, 0, 0});
        for (const auto& [idx, p] : r.corners.corners) draw_marker(r.user_view, p, 1, {0, 255, 0});
      }
    } catch (const Error& e) {
      r.name = c.name;
      r.variant = c.variant;
      r.correction = c.correction;
      r.ok = false;
      r.error = std::string(to_string(e.code())) + ": " + e.what();
    }
    report.cases.push_back(std::move(r));
    if (!base) {
      if (!report.cases.back().ok) {
        throw Error(ErrorCode::stage, "base case failed: " + report.cases.back().error);
      }
      base = report.cases.front().corners;
    }
  }
  return report;
}

std::vector<BenchmarkCase> standard_suite(const DepthNoiseModel& noise) {
  std::vector<BenchmarkCase> suite;
  for (auto v : {SceneVariant::base_plane, SceneVariant::box, SceneVariant::cylinder,
                 SceneVariant::sphere_cluster, SceneVariant::cloth}) {
    BenchmarkCase c;
    c.name = std::string(to_string(v));
    c.variant = v;
    c.noise = noise;
    if (v == SceneVariant::base_plane) c.geometry = GeometrySource::noiseless;
    suite.push_back(c);
  }
  return suite;
}

}  // namespace air
