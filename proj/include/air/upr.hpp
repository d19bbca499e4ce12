#pragma once

#include <optional>

#include "air/geometry.hpp"

namespace air {

/// Tracked eye position in the rear-camera frame, meters. The virtual screen
/// is the rear-frame z = 0 plane, so e_z must be non-zero.
struct EyePose {
  double x = 0.0;
  double y = 0.0;
  double z = 1.5;

  Vec3 position() const { return {x, y, z}; }
};

/// Off-axis perspective matrix for an eye looking at the z = 0 plane:
/// [[-ez, 0, ex, 0], [0, -ez, ey, 0], [0, 0, 1, -ez]]. Throws
/// eye_on_screen_plane when ez == 0.
Mat34 user_projection_matrix(const EyePose& eye);

/// Screen window on the z = 0 plane (meters, centered on the origin) and the
/// raster it maps to. With mirror_x the raster u axis runs along -x, which is
/// the viewer's right for an eye on the +z side.
struct Viewport {
  double width_m = 2.0;
  double height_m = 1.125;
  int width_px = 1920;
  int height_px = 1080;
  bool mirror_x = true;

  Vec2 to_raster(const Vec2& screen) const;
  Vec2 to_screen(const Vec2& raster) const;
};

/// A_upr = A_user * [R | t]_{world -> rear}, with both factors kept.
class UprMatrix {
 public:
  UprMatrix(const EyePose& eye, const RigidTransform& world_to_rear);

  const Mat34& matrix() const { return a_upr_; }
  const Mat34& user_matrix() const { return a_user_; }
  const RigidTransform& world_to_rear() const { return world_to_rear_; }
  const EyePose& eye() const { return eye_; }
  Vec3 eye_world() const;

  Vec3 homogeneous(const Vec3& world) const { return a_upr_ * world.homogeneous(); }
  /// Screen-plane coordinates (meters) of a world point, nullopt when the
  /// point lies on the plane through the eye parallel to the screen.
  std::optional<Vec2> image(const Vec3& world) const;
  /// True when the point lies on the far side of the eye, toward the screen.
  bool in_front(const Vec3& world) const;
  /// World position of a point (x, y, 0) on the virtual screen.
  Vec3 screen_point_world(const Vec2& screen) const;

 private:
  EyePose eye_;
  RigidTransform world_to_rear_;
  Mat34 a_user_;
  Mat34 a_upr_;
};

UprMatrix upr_matrix(const EyePose& eye, const RigidTransform& world_to_rear);

/// Pinhole camera placed at the eye whose image coincides with the viewport
/// raster for every point on the screen plane.
struct ViewCamera {
  PinholeDevice device;
  RigidTransform to_world;
};

/// Throws invalid_argument unless viewport.mirror_x == (eye.z > 0).
ViewCamera matched_user_camera(const UprMatrix& upr, const Viewport& viewport);

}  // namespace air
