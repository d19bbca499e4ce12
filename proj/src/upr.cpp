#include "air/upr.hpp"

#include <cmath>

#include "air/error.hpp"

namespace air {

Mat34 user_projection_matrix(const EyePose& e) {
  if (e.z == 0.0) {
    throw Error(ErrorCode::eye_on_screen_plane, "eye lies on the virtual screen plane (e_z = 0)");
  }
  Mat34 a;
  a << -e.z, 0.0, e.x, 0.0,
       0.0, -e.z, e.y, 0.0,
       0.0, 0.0, 1.0, -e.z;
  return a;
}

Vec2 Viewport::to_raster(const Vec2& s) const {
  const double sx = mirror_x ? -1.0 : 1.0;
  return {width_px * (0.5 + sx * s.x() / width_m) - 0.5, height_px * (0.5 + s.y() / height_m) - 0.5};
}

Vec2 Viewport::to_screen(const Vec2& r) const {
  const double sx = mirror_x ? -1.0 : 1.0;
  return {sx * width_m * ((r.x() + 0.5) / width_px - 0.5),
          height_m * ((r.y() + 0.5) / height_px - 0.5)};
}

UprMatrix::UprMatrix(const EyePose& eye, const RigidTransform& world_to_rear)
    : eye_(eye), world_to_rear_(world_to_rear), a_user_(user_projection_matrix(eye)) {
  a_upr_ = a_user_ * world_to_rear_.matrix();
}

Vec3 UprMatrix::eye_world() const { return world_to_rear_.inverse().apply(eye_.position()); }

std::optional<Vec2> UprMatrix::image(const Vec3& world) const {
  const Vec3 h = homogeneous(world);
  if (h.z() == 0.0) return std::nullopt;
  return Vec2(h.x() / h.z(), h.y() / h.z());
}

bool UprMatrix::in_front(const Vec3& world) const {
  // Third coordinate is z_rear - e_z; the screen side has the opposite sign of e_z.
  return homogeneous(world).z() * eye_.z < 0.0;
}

Vec3 UprMatrix::screen_point_world(const Vec2& s) const {
  return world_to_rear_.inverse().apply(Vec3(s.x(), s.y(), 0.0));
}

UprMatrix upr_matrix(const EyePose& eye, const RigidTransform& world_to_rear) {
  return UprMatrix(eye, world_to_rear);
}

ViewCamera matched_user_camera(const UprMatrix& upr, const Viewport& vp) {
  const EyePose& e = upr.eye();
  if (vp.mirror_x != (e.z > 0.0)) {
    throw Error(ErrorCode::invalid_argument,
                "viewport mirroring must match the eye side of the screen plane");
  }
  const double d = std::abs(e.z);
  const double sx = vp.mirror_x ? -1.0 : 1.0;
  const double kx = vp.width_px / vp.width_m;
  const double ky = vp.height_px / vp.height_m;
  ViewCamera cam;
  cam.device.fx = kx * d;
  cam.device.fy = ky * d;
  cam.device.cx = vp.width_px / 2.0 - 0.5 + sx * kx * e.x;
  cam.device.cy = vp.height_px / 2.0 - 0.5 + ky * e.y;
  cam.device.width = vp.width_px;
  cam.device.height = vp.height_px;
  Mat3 rot = Mat3::Identity();
  if (vp.mirror_x) {
    rot(0, 0) = -1.0;
    rot(2, 2) = -1.0;
  }
  cam.to_world = upr.world_to_rear().inverse() * RigidTransform{rot, e.position()};
  return cam;
}

}  // namespace air
