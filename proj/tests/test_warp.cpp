#include <gtest/gtest.h>

#include <cmath>

#include "air/warp.hpp"
#include "test_util.hpp"

using namespace air;

namespace {

TriangleMesh quad(const Vec3& c, const Vec3& u, const Vec3& v) {
  TriangleMesh m;
  m.vertices = {c - u - v, c + u - v, c + u + v, c - u + v};
  m.faces = {{0, 1, 2}, {0, 2, 3}};
  return m;
}

// Eye 1.5 m behind a screen plane that coincides with world z = 0 seen from
// the rear frame; the rear camera faces world -z.
UprMatrix simple_upr() {
  const RigidTransform rear_to_world = RigidTransform::from_axis_angle(Vec3::UnitY(), kPi, Vec3::Zero());
  return UprMatrix({0, 0, 1.5}, rear_to_world.inverse());
}

int grey(const Rgb& c) { return c[0]; }

}  // namespace

TEST(Checker, CornerPositions) {
  const CheckerPattern p;
  const auto corners = p.inner_corners(1920, 1080);
  ASSERT_EQ(corners.size(), 5u * 8u);
  EXPECT_EQ(corners[0].first, 0);
  EXPECT_VEC_NEAR(corners[0].second, Vec2(609.5, 339.5), 0.0);
  EXPECT_EQ(corners[8 + 2].first, 10);
  EXPECT_VEC_NEAR(corners[8 + 2].second, Vec2(809.5, 439.5), 0.0);
}

TEST(Pass1, CheckerGridIsExact) {
  const UprMatrix upr = simple_upr();
  const Viewport vp;
  const CheckerPattern p;
  const RasterImage img = render_user_view(p, upr, vp);
  ASSERT_EQ(img.width(), 1920);
  EXPECT_EQ(img.at(0, 0), p.surround);
  // Squares alternate starting with dark at the top left.
  EXPECT_EQ(img.at(510, 240), p.dark);
  EXPECT_EQ(img.at(609, 240), p.dark);
  EXPECT_EQ(img.at(610, 240), p.light);
  EXPECT_EQ(img.at(610, 340), p.dark);
  EXPECT_EQ(img.at(1409, 839), p.light);
  EXPECT_EQ(img.at(1410, 839), p.surround);
}

TEST(Pass1, SolidEquirect) {
  EquirectContent e{RasterImage(64, 32, {10, 200, 30})};
  const Viewport vp{2.0, 1.125, 64, 36, true};
  const RasterImage img = render_user_view(e, simple_upr(), vp);
  for (const auto& px : img.pixels()) EXPECT_EQ(px, (Rgb{10, 200, 30}));
}

TEST(Pass1, MeshVerticesFollowViewportMap) {
  const UprMatrix upr = simple_upr();
  const Viewport vp;
  // Triangle lying on the screen plane (world z = 0).
  const std::vector<Vec2> screen{{-0.5, -0.3}, {0.4, -0.2}, {0.1, 0.4}};
  ColoredMesh cm;
  for (const auto& s : screen) cm.mesh.vertices.push_back(upr.screen_point_world(s));
  cm.mesh.faces = {{0, 1, 2}};
  cm.color = {255, 0, 0};
  MeshSetContent content;
  content.meshes.push_back(cm);
  const RasterImage img = render_user_view(content, upr, vp);
  // Analytic coverage from the vertex raster positions; pixels within half a
  // pixel of an edge are not judged.
  std::vector<Vec2> r;
  for (const auto& s : screen) r.push_back(vp.to_raster(s));
  const auto edge = [](const Vec2& a, const Vec2& b, const Vec2& p) {
    const Vec2 d = b - a;
    return (d.x() * (p.y() - a.y()) - d.y() * (p.x() - a.x())) / d.norm();
  };
  const double orient = edge(r[0], r[1], r[2]) > 0 ? 1.0 : -1.0;
  int judged = 0;
  for (int v = 0; v < img.height(); ++v) {
    for (int u = 0; u < img.width(); ++u) {
      const Vec2 p(u, v);
      const double d = std::min({orient * edge(r[0], r[1], p), orient * edge(r[1], r[2], p),
                                 orient * edge(r[2], r[0], p)});
      if (std::abs(d) < 0.5) continue;
      EXPECT_EQ(img.at(u, v)[0] == 255, d > 0) << u << "," << v;
      ++judged;
    }
  }
  EXPECT_EQ(judged > 0, true);
}

TEST(Pass1, MeshDepthOrder) {
  const UprMatrix upr = simple_upr();
  const Viewport vp{2.0, 1.125, 192, 108, true};
  MeshSetContent content;
  // Nearer quad (world z = 0.5) in green hides the farther one (z = 1) in red.
  content.meshes.push_back({quad({0, 0, 1}, {0.5, 0, 0}, {0, 0.5, 0}), {255, 0, 0}});
  content.meshes.push_back({quad({0, 0, 0.5}, {0.3, 0, 0}, {0, 0.3, 0}), {0, 255, 0}});
  const RasterImage img = render_user_view(content, upr, vp);
  EXPECT_EQ(img.at(96, 54), (Rgb{0, 255, 0}));
  EXPECT_EQ(img.at(0, 0), (Rgb{0, 0, 0}));
}

TEST(Warp, IdentityWhenProjectorIsTheEye) {
  const UprMatrix upr = simple_upr();
  const Viewport vp{2.0, 1.125, 480, 270, true};
  const ViewCamera eye_cam = matched_user_camera(upr, vp);
  CheckerPattern p;
  p.square_px = 25;
  const RasterImage pass1 = render_user_view(p, upr, vp);
  const WorldGeometry screen = WorldGeometry::from_mesh(quad(Vec3::Zero(), {3, 0, 0}, {0, 3, 0}));
  const RasterImage fb = warp_to_projector(screen, upr, vp, pass1, Emitter{eye_cam.device, eye_cam.to_world});
  ASSERT_EQ(fb.width(), pass1.width());
  int worst = 0;
  for (int v = 0; v < fb.height(); ++v) {
    for (int u = 0; u < fb.width(); ++u) {
      for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(fb.at(u, v)[k] - pass1.at(u, v)[k]));
    }
  }
  EXPECT_LE(worst, 1);
}

TEST(Warp, MissIsBlack) {
  const UprMatrix upr = simple_upr();
  const Viewport vp{2.0, 1.125, 96, 54, true};
  const RasterImage pass1(96, 54, {255, 255, 255});
  const Emitter proj{{100, 100, 31.5, 23.5, 0, 64, 48}, RigidTransform::identity()};
  const RasterImage fb = warp_to_projector(WorldGeometry{}, upr, vp, pass1, proj);
  for (const auto& px : fb.pixels()) EXPECT_EQ(px, (Rgb{0, 0, 0}));
}

TEST(Warp, ObliquePlaneCornerOracle) {
  // Projector at the origin looking down +z, 45 degree plane, eye behind.
  const UprMatrix upr = simple_upr();
  const Viewport vp;
  const PinholeDevice dev{1400, 1400, 959.5, 539.5, 0, 1920, 1080};
  const Emitter proj{dev, RigidTransform::from_axis_angle(Vec3::UnitX(), 0.0, {0.05, -0.03, 0.0})};
  const Vec3 n = Vec3(1, 0, -1).normalized();
  const Vec3 x0(0, 0, 2.5);
  const WorldGeometry plane = WorldGeometry::from_mesh(quad(x0, Vec3(1, 0, 1) * 3, {0, 3, 0}));
  const CheckerPattern p;
  const RasterImage pass1 = render_user_view(p, upr, vp);
  const RasterImage fb = warp_to_projector(plane, upr, vp, pass1, proj);
  const Vec3 eye = upr.eye_world();
  for (const auto& [idx, corner] : p.inner_corners(vp.width_px, vp.height_px)) {
    // Eye ray through the corner's screen point meets the plane at X.
    const Vec3 s = upr.screen_point_world(vp.to_screen(corner));
    const Vec3 d = s - eye;
    const Vec3 xw = eye + d * ((x0 - eye).dot(n) / d.dot(n));
    const Vec2 q = project(dev, proj.to_world.inverse(), xw).pixel;
    // Going forward from q through the warp lands back on the corner.
    const Vec3 o = proj.to_world.translation;
    const Vec3 r = proj.to_world.apply_direction(pixel_ray(dev, q));
    const Vec3 hit = o + r * ((x0 - o).dot(n) / r.dot(n));
    EXPECT_LE((vp.to_raster(*upr.image(hit)) - corner).norm(), 0.5) << idx;
    // And the framebuffer shows a checker corner there.
    const int u = static_cast<int>(std::lround(q.x()));
    const int v = static_cast<int>(std::lround(q.y()));
    const int a = grey(fb.at(u - 6, v - 6)), b = grey(fb.at(u + 6, v + 6));
    const int c = grey(fb.at(u + 6, v - 6)), e = grey(fb.at(u - 6, v + 6));
    EXPECT_EQ(a, b) << idx;
    EXPECT_EQ(c, e) << idx;
    EXPECT_NE(a, c) << idx;
  }
}

TEST(Passthrough, PixelMap) {
  const PinholeDevice dev{1400, 1400, 959.5, 539.5, 0, 1920, 1080};
  EXPECT_VEC_NEAR(passthrough_pixel({100.0, 200.0}, 1920, 1080, dev), Vec2(100.0, 200.0), 1e-12);
  const PinholeDevice half{700, 700, 479.5, 269.5, 0, 960, 540};
  EXPECT_VEC_NEAR(passthrough_pixel({-0.5, -0.5}, 1920, 1080, half), Vec2(-0.5, -0.5), 1e-12);
  EXPECT_VEC_NEAR(passthrough_pixel({1.5, 1.5}, 1920, 1080, half), Vec2(0.5, 0.5), 1e-12);
  const RasterImage img = render_user_view(CheckerPattern{}, simple_upr(), Viewport{});
  EXPECT_EQ(passthrough_to_projector(img, dev), img);
}

namespace {

Scene white_wall(double z) {
  return Scene({Surface{0, Vec3::Ones(), PlaneShape{{0, 0, z}, {0, 0, -1}, Vec2::Zero()}}});
}

}  // namespace

TEST(View, BlackFramebufferShowsAmbientAlbedo) {
  const PinholeDevice dev{100, 100, 31.5, 23.5, 0, 64, 48};
  const Scene scene({Surface{0, Vec3(0.2, 0.4, 0.6), PlaneShape{{0, 0, 2}, {0, 0, -1}, Vec2::Zero()}}});
  const Emitter proj{dev, RigidTransform::identity()};
  const RasterImage view = simulate_projection_and_view(scene, RasterImage(64, 48), proj,
                                                        ViewCamera{dev, RigidTransform::identity()});
  for (const auto& px : view.pixels()) EXPECT_EQ(px, to_rgb(255.0 * 0.5 * Vec3(0.2, 0.4, 0.6)));
}

TEST(View, WhiteFramebufferFromProjectorPose) {
  const PinholeDevice dev{100, 100, 31.5, 23.5, 0, 64, 48};
  const Emitter proj{dev, RigidTransform::identity()};
  const RasterImage view = simulate_projection_and_view(
      white_wall(2), RasterImage(64, 48, {255, 255, 255}), proj, ViewCamera{dev, RigidTransform::identity()});
  for (const auto& px : view.pixels()) EXPECT_EQ(px, (Rgb{255, 255, 255}));
}

TEST(View, ShadowFootprintOracle) {
  const PinholeDevice dev{200, 200, 99.5, 99.5, 0, 200, 200};
  const Emitter proj{dev, RigidTransform::identity()};
  // Occluder: 0.4 m square at z = 1; its shadow on z = 3 is a 1.2 m square.
  const Scene scene({Surface{0, Vec3::Ones(), PlaneShape{{0, 0, 3}, {0, 0, -1}, Vec2::Zero()}},
                     Surface{1, Vec3::Constant(0.5), PlaneShape{{0, 0, 1}, {0, 0, -1}, {0.2, 0.2}}}});
  const ViewCamera viewer{dev, RigidTransform::from_axis_angle(Vec3::UnitY(), 0.0, {0.5, 0.1, 0})};
  const RasterImage view =
      simulate_projection_and_view(scene, RasterImage(200, 200, {255, 255, 255}), proj, viewer);
  // 0: far wall lit, 1: far wall dark (shadow or outside the frustum), 2: occluder.
  const auto predict = [&](const Vec2& px) {
    const Vec3 o = viewer.to_world.translation;
    const Vec3 d = pixel_ray(dev, px);
    const Vec3 occ = o + d * ((1.0 - o.z()) / d.z());
    if (std::abs(occ.x()) <= 0.2 && std::abs(occ.y()) <= 0.2) return 2;
    const Vec3 wall = o + d * ((3.0 - o.z()) / d.z());
    const bool in_frustum = std::abs(wall.x()) <= 1.5 && std::abs(wall.y()) <= 1.5;
    const bool shadowed = std::abs(wall.x()) <= 0.6 && std::abs(wall.y()) <= 0.6;
    return (in_frustum && !shadowed) ? 0 : 1;
  };
  int compared = 0;
  for (int v = 0; v < 200; ++v) {
    for (int u = 0; u < 200; ++u) {
      const int c = predict({u, v});
      bool interior = true;
      for (const auto& off : {Vec2(1, 0), Vec2(-1, 0), Vec2(0, 1), Vec2(0, -1)}) {
        interior = interior && predict(Vec2(u, v) + off) == c;
      }
      if (!interior || c == 2) continue;
      const int observed = view.at(u, v)[0] > 200 ? 0 : 1;
      EXPECT_EQ(observed, c) << u << "," << v;
      ++compared;
    }
  }
  EXPECT_GT(compared, 20000);
}

TEST(Propagate, IdentityPipeline) {
  const UprMatrix upr = simple_upr();
  const Viewport vp;
  const ViewCamera eye_cam = matched_user_camera(upr, vp);
  const Emitter proj{eye_cam.device, eye_cam.to_world};
  const TriangleMesh screen_mesh = quad(Vec3::Zero(), {3, 0, 0}, {0, 3, 0});
  const WorldGeometry geometry = WorldGeometry::from_mesh(screen_mesh);
  const Scene scene({Surface{0, Vec3::Ones(), make_mesh_shape(screen_mesh)}});
  const CheckerPattern p;
  const auto corners = p.inner_corners(vp.width_px, vp.height_px);
  const auto out = propagate_corners(corners, geometry, upr, vp, proj, PhysicalWorld{&scene, proj},
                                     eye_cam, Correction::on);
  ASSERT_EQ(out.size(), corners.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    ASSERT_TRUE(out[k].pixel);
    EXPECT_VEC_NEAR(*out[k].pixel, corners[k].second, 1e-6);
  }
}

TEST(Propagate, MissingGeometryIsUnresolved) {
  const UprMatrix upr = simple_upr();
  const Viewport vp;
  const ViewCamera eye_cam = matched_user_camera(upr, vp);
  const Emitter proj{eye_cam.device, eye_cam.to_world};
  const Scene scene = white_wall(-3);
  const CheckerPattern p;
  const auto corners = p.inner_corners(vp.width_px, vp.height_px);
  const auto out = propagate_corners(corners, WorldGeometry{}, upr, vp, proj, PhysicalWorld{&scene, proj},
                                     eye_cam, Correction::on);
  for (const auto& c : out) EXPECT_FALSE(c.pixel);
}

TEST(Image, BilinearSampling) {
  RasterImage img(2, 1);
  img.at(0, 0) = {0, 0, 0};
  img.at(1, 0) = {200, 100, 50};
  EXPECT_VEC_NEAR(img.sample_bilinear({0.5, 0.0}), Vec3(100, 50, 25), 1e-12);
  EXPECT_VEC_NEAR(img.sample_bilinear({1.0, 0.0}), Vec3(200, 100, 50), 1e-12);
  // Half a texel past the last center blends with the black border.
  EXPECT_VEC_NEAR(img.sample_bilinear({1.25, 0.0}), Vec3(150, 75, 37.5), 1e-12);
  EXPECT_VEC_NEAR(img.sample_bilinear({5.0, 0.0}), Vec3::Zero(), 0.0);
}
