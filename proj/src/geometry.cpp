#include "air/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "air/error.hpp"

namespace air {

UnitAxis UnitAxis::from(const Vec3& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::invalid_argument, "axis vector must be finite and non-zero");
  }
  return UnitAxis(v / n);
}

UnitAxis UnitAxis::checked(const Vec3& v, double tol) {
  const double n = v.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > tol) {
    throw Error(ErrorCode::invalid_argument,
                "axis must be unit length (norm " + std::to_string(n) + ")");
  }
  return UnitAxis(v / n);
}

double angle_between(const Vec3& a, const Vec3& b) {
  // atan2 form stays accurate for tiny angles, unlike acos of the dot product.
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

RigidTransform RigidTransform::from_axis_angle(const Vec3& axis, double theta,
                                               const Vec3& translation) {
  return {rotation_about_axis(UnitAxis::from(axis), theta), translation};
}

RigidTransform RigidTransform::from_matrix(const Mat3& rotation, const Vec3& translation) {
  Eigen::JacobiSVD<Mat3> svd(rotation, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    throw Error(ErrorCode::invalid_argument, "rotation matrix has negative determinant");
  }
  return {r, translation};
}

RigidTransform RigidTransform::inverse() const {
  const Mat3 rt = rotation.transpose();
  return {rt, -(rt * translation)};
}

Mat4 RigidTransform::matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = rotation;
  m.topRightCorner<3, 1>() = translation;
  return m;
}

Mat34 RigidTransform::matrix34() const {
  Mat34 m;
  m.leftCols<3>() = rotation;
  m.col(3) = translation;
  return m;
}

RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) {
  return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
}

double rotation_distance(const Mat3& a, const Mat3& b) {
  return Eigen::AngleAxisd(a.transpose() * b).angle();
}

Mat3 rotation_about_axis(const UnitAxis& axis, double theta) {
  const double x = axis.direction().x();
  const double y = axis.direction().y();
  const double z = axis.direction().z();
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double k = 1.0 - c;
  Mat3 r;
  r << c + x * x * k,     x * y * k - z * s, x * z * k + y * s,
       y * x * k + z * s, c + y * y * k,     y * z * k - x * s,
       z * x * k - y * s, z * y * k + x * s, c + z * z * k;
  return r;
}

Mat3 rotation_about_axis(const Vec3& axis, double theta) {
  return rotation_about_axis(UnitAxis::checked(axis), theta);
}

void PinholeDevice::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::invalid_argument, "pinhole device: " + what);
  };
  if (width <= 0 || height <= 0) fail("resolution must be positive");
  if (!(fx > 0.0) || !(fy > 0.0)) fail("focal lengths must be positive");
  if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height)) {
    fail("principal point must lie inside the image");
  }
  if (!std::isfinite(skew)) fail("skew must be finite");
}

Mat3 PinholeDevice::intrinsic_matrix() const {
  Mat3 k;
  k << fx, skew, cx,
       0.0, fy, cy,
       0.0, 0.0, 1.0;
  return k;
}

PinholeDevice PinholeDevice::from_matrix(const Mat3& k, int width, int height) {
  PinholeDevice d;
  d.fx = k(0, 0) / k(2, 2);
  d.skew = k(0, 1) / k(2, 2);
  d.cx = k(0, 2) / k(2, 2);
  d.fy = k(1, 1) / k(2, 2);
  d.cy = k(1, 2) / k(2, 2);
  d.width = width;
  d.height = height;
  return d;
}

bool PinholeDevice::in_image(const Vec2& p) const {
  return p.x() >= -0.5 && p.x() < width - 0.5 && p.y() >= -0.5 && p.y() < height - 0.5;
}

Projection project(const PinholeDevice& device, const Vec3& q) {
  if (!(q.z() > 0.0)) {
    throw Error(ErrorCode::behind_device, "point is behind the device (z <= 0)");
  }
  const double x = q.x() / q.z();
  const double y = q.y() / q.z();
  return {Vec2(device.fx * x + device.skew * y + device.cx, device.fy * y + device.cy), q.z()};
}

Projection project(const PinholeDevice& device, const RigidTransform& source_to_device,
                   const Vec3& point) {
  return project(device, source_to_device.apply(point));
}

Vec3 backproject(const PinholeDevice& device, const Vec2& pixel, double depth) {
  if (!(depth > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "backprojection depth must be positive");
  }
  const double y = (pixel.y() - device.cy) / device.fy;
  const double x = (pixel.x() - device.cx - device.skew * y) / device.fx;
  return Vec3(x * depth, y * depth, depth);
}

Vec3 pixel_ray(const PinholeDevice& device, const Vec2& pixel) {
  return backproject(device, pixel, 1.0).normalized();
}

Alignment rigid_align(std::span<const Vec3> source, std::span<const Vec3> target) {
  if (source.size() != target.size()) {
    throw Error(ErrorCode::invalid_argument, "rigid_align: point lists differ in length");
  }
  const std::size_t n = source.size();
  if (n < 3) {
    throw Error(ErrorCode::degenerate_configuration, "rigid_align needs at least 3 points");
  }
  Vec3 cs = Vec3::Zero();
  Vec3 ct = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    cs += source[i];
    ct += target[i];
  }
  cs /= static_cast<double>(n);
  ct /= static_cast<double>(n);

  Mat3 cov = Mat3::Zero();
  Mat3 spread = Mat3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 s = source[i] - cs;
    cov += s * (target[i] - ct).transpose();
    spread += s * s.transpose();
  }
  Eigen::JacobiSVD<Mat3> spread_svd(spread);
  const auto sv = spread_svd.singularValues();
  // spread is quadratic in distance: 1e-12 here is a 1e-6 relative width.
  if (!(sv(0) > 0.0) || sv(1) <= 1e-12 * sv(0)) {
    throw Error(ErrorCode::degenerate_configuration, "rigid_align: source points are collinear");
  }

  Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3 u = svd.matrixU();
  const Mat3 v = svd.matrixV();
  Mat3 d = Mat3::Identity();
  if ((v * u.transpose()).determinant() < 0.0) d(2, 2) = -1.0;
  Alignment out;
  out.transform.rotation = v * d * u.transpose();
  out.transform.translation = ct - out.transform.rotation * cs;

  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sq += (out.transform.apply(source[i]) - target[i]).squaredNorm();
  }
  out.rms = std::sqrt(sq / static_cast<double>(n));
  return out;
}

Vec3 rotation_vector(const Mat3& rotation) {
  const Eigen::AngleAxisd aa(rotation);
  return aa.axis() * aa.angle();
}

Mat3 rotation_from_vector(const Vec3& rv) {
  const double angle = rv.norm();
  if (angle < 1e-300) return Mat3::Identity();
  return Eigen::AngleAxisd(angle, rv / angle).toRotationMatrix();
}

}  // namespace air
