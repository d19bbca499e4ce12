#include "air/warp.hpp"

#include <algorithm>
#include <cmath>

#include "air/error.hpp"
#include "air/parallel.hpp"

namespace air {

namespace {

constexpr double kVisibilityTolerance = 1e-6;  // meters

Vec3 as_vec(const Rgb& c) { return Vec3(c[0], c[1], c[2]); }

/// True when nothing in `scene` lies between `from` and `to`.
bool unoccluded(const Scene& scene, const Vec3& from, const Vec3& to) {
  const Vec3 d = to - from;
  const double dist = d.norm();
  if (!(dist > 0.0)) return true;
  const auto hit = scene.raycast(from, d / dist);
  return !hit || hit->t >= dist - kVisibilityTolerance * std::max(1.0, dist);
}

Vec3 sample_equirect(const RasterImage& pano, const Vec3& dir) {
  const double lon = std::atan2(dir.x(), dir.z());
  const double lat = std::asin(std::clamp(dir.y(), -1.0, 1.0));
  const double u = (lon / (2.0 * kPi) + 0.5) * pano.width() - 0.5;
  const double v = std::clamp((lat / kPi + 0.5) * pano.height() - 0.5, 0.0, pano.height() - 1.0);
  const double fu = std::floor(u);
  const double fv = std::floor(v);
  const double au = u - fu;
  const double av = v - fv;
  auto texel = [&](long x, long y) {
    const long w = pano.width();
    x = ((x % w) + w) % w;
    y = std::clamp(y, 0L, static_cast<long>(pano.height() - 1));
    return as_vec(pano.at(static_cast<int>(x), static_cast<int>(y)));
  };
  const long x0 = static_cast<long>(fu);
  const long y0 = static_cast<long>(fv);
  return (1.0 - av) * ((1.0 - au) * texel(x0, y0) + au * texel(x0 + 1, y0)) +
         av * ((1.0 - au) * texel(x0, y0 + 1) + au * texel(x0 + 1, y0 + 1));
}

void rasterize_meshes(const MeshSetContent& content, const UprMatrix& upr, const Viewport& vp,
                      RasterImage& out) {
  // Depth key: 1 / |w| with w = z_rear - e_z; larger is nearer the eye.
  std::vector<double> nearest(static_cast<std::size_t>(out.width()) * out.height(), 0.0);
  for (const auto& cm : content.meshes) {
    for (const auto& f : cm.mesh.faces) {
      Vec2 p[3];
      double inv_w[3];
      bool ok = true;
      for (int k = 0; k < 3; ++k) {
        const Vec3& v = cm.mesh.vertices[f[k]];
        if (!upr.in_front(v)) {
          ok = false;  // no near-plane clipping: partially visible triangles are skipped
          break;
        }
        const Vec3 h = upr.homogeneous(v);
        p[k] = vp.to_raster(Vec2(h.x() / h.z(), h.y() / h.z()));
        inv_w[k] = 1.0 / std::abs(h.z());
      }
      if (!ok) continue;
      const double area = (p[1] - p[0]).x() * (p[2] - p[0]).y() - (p[1] - p[0]).y() * (p[2] - p[0]).x();
      if (std::abs(area) < 1e-12) continue;
      const int u_lo = std::max(0, static_cast<int>(std::ceil(std::min({p[0].x(), p[1].x(), p[2].x()}))));
      const int u_hi = std::min(out.width() - 1, static_cast<int>(std::floor(std::max({p[0].x(), p[1].x(), p[2].x()}))));
      const int v_lo = std::max(0, static_cast<int>(std::ceil(std::min({p[0].y(), p[1].y(), p[2].y()}))));
      const int v_hi = std::min(out.height() - 1, static_cast<int>(std::floor(std::max({p[0].y(), p[1].y(), p[2].y()}))));
      for (int v = v_lo; v <= v_hi; ++v) {
        for (int u = u_lo; u <= u_hi; ++u) {
          const Vec2 q(u, v);
          auto edge = [&](const Vec2& a, const Vec2& b) {
            return ((b - a).x() * (q - a).y() - (b - a).y() * (q - a).x()) / area;
          };
          const double b0 = edge(p[1], p[2]);
          const double b1 = edge(p[2], p[0]);
          const double b2 = edge(p[0], p[1]);
          if (b0 < 0.0 || b1 < 0.0 || b2 < 0.0) continue;
          const double depth = b0 * inv_w[0] + b1 * inv_w[1] + b2 * inv_w[2];
          double& best = nearest[static_cast<std::size_t>(v) * out.width() + u];
          if (depth > best) {
            best = depth;
            out.at(u, v) = cm.color;
          }
        }
      }
    }
  }
}

}  // namespace

Vec2 CheckerPattern::origin(int width, int height) const {
  return {std::floor((width - cols * square_px) / 2.0), std::floor((height - rows * square_px) / 2.0)};
}

std::vector<std::pair<int, Vec2>> CheckerPattern::inner_corners(int width, int height) const {
  const Vec2 o = origin(width, height);
  std::vector<std::pair<int, Vec2>> out;
  for (int i = 0; i + 1 < rows; ++i) {
    for (int j = 0; j + 1 < cols; ++j) {
      out.emplace_back(i * (cols - 1) + j,
                       o + Vec2((j + 1) * square_px, (i + 1) * square_px) - Vec2(0.5, 0.5));
    }
  }
  return out;
}

WorldGeometry WorldGeometry::from_mesh(TriangleMesh world_mesh) {
  return {std::make_shared<const MeshBvh>(std::move(world_mesh))};
}

std::optional<MeshHit> WorldGeometry::intersect(const Vec3& origin, const Vec3& dir) const {
  if (!bvh) return std::nullopt;
  return bvh->intersect(origin, dir);
}

WorldGeometry geometry_from_depth(const DepthImage& depth, const PinholeDevice& device,
                                  const RigidTransform& front_to_world, double max_depth_jump) {
  return WorldGeometry::from_mesh(
      transformed(reconstruct_mesh(depth, device, max_depth_jump), front_to_world));
}

RasterImage render_user_view(const Content& content, const UprMatrix& upr, const Viewport& vp) {
  RasterImage out(vp.width_px, vp.height_px);
  if (const auto* checker = std::get_if<CheckerPattern>(&content)) {
    const Vec2 o = checker->origin(vp.width_px, vp.height_px);
    parallel_rows(vp.height_px, [&](int v) {
      for (int u = 0; u < vp.width_px; ++u) {
        const double x = (u + 0.5 - o.x()) / checker->square_px;
        const double y = (v + 0.5 - o.y()) / checker->square_px;
        if (x < 0.0 || y < 0.0 || x >= checker->cols || y >= checker->rows) {
          out.at(u, v) = checker->surround;
          continue;
        }
        const int parity = (static_cast<int>(x) + static_cast<int>(y)) % 2;
        out.at(u, v) = parity == 0 ? checker->dark : checker->light;
      }
    });
  } else if (const auto* equi = std::get_if<EquirectContent>(&content)) {
    if (equi->panorama.width() != 2 * equi->panorama.height()) {
      throw Error(ErrorCode::invalid_argument, "equirectangular panorama must be 2:1");
    }
    const Vec3 eye = upr.eye_world();
    parallel_rows(vp.height_px, [&](int v) {
      for (int u = 0; u < vp.width_px; ++u) {
        const Vec3 s = upr.screen_point_world(vp.to_screen(Vec2(u, v)));
        out.at(u, v) = to_rgb(sample_equirect(equi->panorama, (s - eye).normalized()));
      }
    });
  } else {
    const auto& meshes = std::get<MeshSetContent>(content);
    out = RasterImage(vp.width_px, vp.height_px, meshes.background);
    rasterize_meshes(meshes, upr, vp, out);
  }
  return out;
}

RasterImage warp_to_projector(const WorldGeometry& geometry, const UprMatrix& upr,
                              const Viewport& vp, const RasterImage& pass1,
                              const Emitter& projector) {
  const PinholeDevice& dev = projector.device;
  RasterImage out(dev.width, dev.height);
  if (geometry.empty()) return out;
  const Vec3 origin = projector.to_world.translation;
  parallel_rows(dev.height, [&](int v) {
    for (int u = 0; u < dev.width; ++u) {
      const Vec3 dir = projector.to_world.apply_direction(pixel_ray(dev, Vec2(u, v)));
      const auto hit = geometry.intersect(origin, dir);
      if (!hit) continue;
      const Vec3 p = origin + hit->t * dir;
      if (!upr.in_front(p)) continue;
      const auto screen = upr.image(p);
      if (!screen) continue;
      out.at(u, v) = to_rgb(pass1.sample_bilinear(vp.to_raster(*screen)));
    }
  });
  return out;
}

Vec2 passthrough_pixel(const Vec2& c, int w1, int h1, const PinholeDevice& proj) {
  return {(c.x() + 0.5) * proj.width / w1 - 0.5, (c.y() + 0.5) * proj.height / h1 - 0.5};
}

RasterImage passthrough_to_projector(const RasterImage& pass1, const PinholeDevice& proj) {
  RasterImage out(proj.width, proj.height);
  const double sx = static_cast<double>(pass1.width()) / proj.width;
  const double sy = static_cast<double>(pass1.height()) / proj.height;
  parallel_rows(proj.height, [&](int v) {
    for (int u = 0; u < proj.width; ++u) {
      out.at(u, v) = to_rgb(pass1.sample_bilinear(Vec2((u + 0.5) * sx - 0.5, (v + 0.5) * sy - 0.5)));
    }
  });
  return out;
}

std::optional<Vec2> project_visible(const PinholeDevice& device, const RigidTransform& to_world,
                                    const Vec3& world_point) {
  const Vec3 q = to_world.inverse().apply(world_point);
  if (!(q.z() > 0.0)) return std::nullopt;
  const Vec2 px = project(device, q).pixel;
  if (!device.in_image(px)) return std::nullopt;
  return px;
}

RasterImage simulate_projection_and_view(const Scene& scene, const RasterImage& framebuffer,
                                         const Emitter& projector, const ViewCamera& viewer,
                                         const Lighting& lighting) {
  if (framebuffer.width() != projector.device.width ||
      framebuffer.height() != projector.device.height) {
    throw Error(ErrorCode::invalid_argument, "framebuffer size must match the projector resolution");
  }
  const PinholeDevice& cam = viewer.device;
  RasterImage out(cam.width, cam.height);
  const Vec3 eye = viewer.to_world.translation;
  const Vec3 proj_center = projector.to_world.translation;
  parallel_rows(cam.height, [&](int v) {
    for (int u = 0; u < cam.width; ++u) {
      const Vec3 dir = viewer.to_world.apply_direction(pixel_ray(cam, Vec2(u, v)));
      const auto hit = scene.raycast(eye, dir);
      if (!hit) continue;
      const Surface* surface = scene.find(hit->surface_id);
      const Vec3 albedo = surface ? surface->albedo : Vec3::Zero();
      Vec3 light = Vec3::Constant(lighting.ambient);
      if (const auto q = project_visible(projector.device, projector.to_world, hit->point)) {
        if (unoccluded(scene, proj_center, hit->point)) {
          const Rgb& fb = framebuffer.at(static_cast<int>(std::lround(q->x())),
                                         static_cast<int>(std::lround(q->y())));
          light += as_vec(fb) / 255.0;
        }
      }
      out.at(u, v) = to_rgb(255.0 * albedo.cwiseProduct(light).cwiseMin(1.0));
    }
  });
  return out;
}

std::vector<PropagatedCorner> propagate_corners(std::span<const std::pair<int, Vec2>> corners,
                                                const WorldGeometry& geometry,
                                                const UprMatrix& upr, const Viewport& vp,
                                                const Emitter& model_projector,
                                                const PhysicalWorld& world,
                                                const ViewCamera& viewer, Correction correction) {
  if (!world.scene) throw Error(ErrorCode::invalid_argument, "physical world has no scene");
  const Scene& scene = *world.scene;
  const Vec3 eye = upr.eye_world();
  const Vec3 model_center = model_projector.to_world.translation;
  std::vector<PropagatedCorner> out;
  out.reserve(corners.size());
  for (const auto& [index, raster] : corners) {
    PropagatedCorner pc{index, std::nullopt};
    std::optional<Vec2> proj_pixel;
    if (correction == Correction::on) {
      // The corner texel is shown wherever the eye ray through its screen
      // position meets the reconstructed geometry.
      const Vec3 s = upr.screen_point_world(vp.to_screen(raster));
      const Vec3 dir = (s - eye).normalized();
      const auto g = geometry.intersect(eye, dir);
      if (g) {
        const Vec3 gp = eye + g->t * dir;
        const auto q = project_visible(model_projector.device, model_projector.to_world, gp);
        if (q) {
          // The projector pixel must reach gp first, or the texel never shows.
          const Vec3 pd = gp - model_center;
          const double dist = pd.norm();
          const auto first = geometry.intersect(model_center, pd / dist);
          if (first && first->t >= dist - kVisibilityTolerance * std::max(1.0, dist)) proj_pixel = q;
        }
      }
    } else {
      proj_pixel = passthrough_pixel(raster, vp.width_px, vp.height_px, world.projector.device);
    }
    if (proj_pixel && world.projector.device.in_image(*proj_pixel)) {
      const Emitter& tp = world.projector;
      const Vec3 dir = tp.to_world.apply_direction(pixel_ray(tp.device, *proj_pixel));
      const auto lit = scene.raycast(tp.to_world.translation, dir);
      if (lit && unoccluded(scene, viewer.to_world.translation, lit->point)) {
        const Vec3 q = viewer.to_world.inverse().apply(lit->point);
        if (q.z() > 0.0) pc.pixel = project(viewer.device, q).pixel;
      }
    }
    out.push_back(pc);
  }
  return out;
}

}  // namespace air
