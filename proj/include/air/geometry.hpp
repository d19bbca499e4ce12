#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace air {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using HomPoint4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat34 = Eigen::Matrix<double, 3, 4>;
using Mat4 = Eigen::Matrix4d;

inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Unit-length direction. Construction normalizes (`from`) or validates
/// (`checked`); the stored vector always has norm 1 to machine precision.
class UnitAxis {
 public:
  UnitAxis() : dir_(0.0, 0.0, 1.0) {}

  /// Normalizes any non-zero vector.
  static UnitAxis from(const Vec3& v);
  /// Accepts only vectors already unit length within `tol`.
  static UnitAxis checked(const Vec3& v, double tol = 1e-6);

  const Vec3& direction() const noexcept { return dir_; }
  UnitAxis flipped() const { return UnitAxis(-dir_); }

 private:
  explicit UnitAxis(const Vec3& d) : dir_(d) {}
  Vec3 dir_;
};

/// Angle between two axes, radians, in [0, pi].
double angle_between(const Vec3& a, const Vec3& b);

/// Maps points of a source frame into a target frame: p' = R p + t.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }
  static RigidTransform from_axis_angle(const Vec3& axis, double theta,
                                        const Vec3& translation);
  /// Orthonormalizes `rotation` before storing it.
  static RigidTransform from_matrix(const Mat3& rotation, const Vec3& translation);

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  Vec3 apply_direction(const Vec3& d) const { return rotation * d; }
  RigidTransform inverse() const;
  Mat4 matrix() const;
  Mat34 matrix34() const;

  /// Composition: (a * b).apply(p) == a.apply(b.apply(p)).
  friend RigidTransform operator*(const RigidTransform& a, const RigidTransform& b);
};

/// Rotation angle (radians) of a.rotation^T * b.rotation.
double rotation_distance(const Mat3& a, const Mat3& b);

/// Rotation of `theta` radians about `axis` (right-handed), written out
/// entry by entry in the closed Rodrigues form.
Mat3 rotation_about_axis(const UnitAxis& axis, double theta);
/// Same, for a raw vector; throws invalid_argument if |axis| deviates from 1
/// by more than 1e-6.
Mat3 rotation_about_axis(const Vec3& axis, double theta);

/// Intrinsics and resolution of a camera or projector. Pixel (u, v) has u
/// growing right and v growing down; integer coordinates are pixel centers.
struct PinholeDevice {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  double skew = 0.0;
  int width = 1;
  int height = 1;

  /// Throws invalid_argument if the invariants do not hold.
  void validate() const;
  Mat3 intrinsic_matrix() const;
  static PinholeDevice from_matrix(const Mat3& k, int width, int height);
  /// True when (u, v) lies within the pixel footprint [-0.5, size - 0.5).
  bool in_image(const Vec2& pixel) const;
};

struct Projection {
  Vec2 pixel;
  double depth = 0.0;  // z in the device frame; the homogeneous scale s
};

/// Projects a point given in a source frame; `source_to_device` maps source
/// coordinates into the device frame. Throws behind_device if z <= 0.
Projection project(const PinholeDevice& device, const RigidTransform& source_to_device,
                   const Vec3& point);
/// Projects a point already expressed in the device frame.
Projection project(const PinholeDevice& device, const Vec3& point_in_device);

/// Device-frame point at pixel (u, v) with depth z. Throws invalid_argument
/// if depth <= 0.
Vec3 backproject(const PinholeDevice& device, const Vec2& pixel, double depth);

/// Unit direction of the ray through a pixel, device frame.
Vec3 pixel_ray(const PinholeDevice& device, const Vec2& pixel);

struct Alignment {
  RigidTransform transform;  // source -> target
  double rms = 0.0;          // meters
};

/// Least-squares rigid transform taking `source` onto `target` (orthogonal
/// Procrustes with reflection guard). Throws degenerate_configuration for
/// fewer than three points or a collinear source set.
Alignment rigid_align(std::span<const Vec3> source, std::span<const Vec3> target);

/// Rotation vector (axis * angle) of a rotation matrix, and back.
Vec3 rotation_vector(const Mat3& rotation);
Mat3 rotation_from_vector(const Vec3& rotation_vector);

}  // namespace air
