#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "air/geometry.hpp"
#include "air/mesh.hpp"

namespace air {

/// Rectangular (or unbounded) plane. In-plane axes: u = normalize(y x n), or
/// normalize(x x n) when n is within ~25 deg of the y axis; v = n x u.
struct PlaneShape {
  Vec3 point = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
  /// Half sizes along u and v; a non-positive component means unbounded.
  Vec2 half_extent = Vec2::Zero();
};

/// Axis-aligned box in its own frame, centered on the pose origin.
struct BoxShape {
  RigidTransform pose;  // box -> world
  Vec3 dimensions = Vec3::Ones();
};

struct SphereShape {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;
};

/// Capped cylinder around the local z axis, spanning z in [-height/2, height/2].
struct CylinderShape {
  RigidTransform pose;  // cylinder -> world
  double radius = 1.0;
  double height = 1.0;
};

struct MeshShape {
  std::shared_ptr<const MeshBvh> bvh;
};

using Shape = std::variant<PlaneShape, BoxShape, SphereShape, CylinderShape, MeshShape>;

/// Albedo is linear RGB in [0, 1].
struct Surface {
  int id = 0;
  Vec3 albedo = Vec3::Constant(0.8);
  Shape shape;
};

MeshShape make_mesh_shape(TriangleMesh mesh);

struct Hit {
  Vec3 point;
  Vec3 normal;  // unit, geometric; orientation not guaranteed to face the ray
  int surface_id = 0;
  double t = 0.0;
};

/// Nearest intersection of a single surface with t > t_min.
std::optional<Hit> intersect(const Surface& surface, const Vec3& origin, const Vec3& dir,
                             double t_min = 1e-6);

/// Inner-corner grid; corner (i, j) sits at (j * square, i * square, 0) in the
/// board frame and has index i * cols + j.
struct CheckerboardTarget {
  RigidTransform pose;  // board -> world
  int rows = 6;
  int cols = 9;
  double square_size = 0.04;

  void validate() const;
  int corner_count() const { return rows * cols; }
  Vec3 corner_world(int index) const;
};

/// Immutable collection of surfaces plus calibration targets.
class Scene {
 public:
  Scene() = default;
  explicit Scene(std::vector<Surface> surfaces, std::vector<CheckerboardTarget> targets = {});

  const std::vector<Surface>& surfaces() const { return surfaces_; }
  const std::vector<CheckerboardTarget>& targets() const { return targets_; }
  const Surface* find(int id) const;

  /// Nearest hit with t > 1e-6 along a unit direction, or nullopt on a miss.
  std::optional<Hit> raycast(const Vec3& origin, const Vec3& dir) const;

 private:
  std::vector<Surface> surfaces_;
  std::vector<CheckerboardTarget> targets_;
};

struct DepthImage {
  int width = 0;
  int height = 0;
  std::vector<double> depth;   // meters, row-major
  std::vector<std::uint8_t> valid;

  DepthImage() = default;
  DepthImage(int w, int h);

  std::size_t index(int u, int v) const { return static_cast<std::size_t>(v) * width + u; }
  bool is_valid(int u, int v) const { return valid[index(u, v)] != 0; }
  double at(int u, int v) const { return depth[index(u, v)]; }
  std::size_t valid_count() const;
};

/// Gaussian range noise plus grazing-angle dropout. The dropout probability
/// is 1 below gamma_full_dropout, falls linearly to 0 at gamma_no_dropout and
/// stays 0 above, where gamma is the ray-to-surface-plane angle (90 deg at
/// perpendicular incidence).
struct DepthNoiseModel {
  double sigma = 0.0;               // meters
  double gamma_full_dropout = 10.0;  // degrees
  double gamma_no_dropout = 30.0;    // degrees
  bool dropout = true;
  std::uint64_t seed = 0;

  void validate() const;
  double dropout_probability(double gamma_deg) const;
  /// No range noise, no dropout.
  static DepthNoiseModel ideal();
};

/// Grazing angle (degrees) between a ray direction and a surface with the
/// given normal.
double grazing_angle_deg(const Vec3& ray_dir, const Vec3& normal);

/// Synthetic depth frame of `scene` seen by `device` at `device_to_world`.
DepthImage sense_depth(const Scene& scene, const PinholeDevice& device,
                       const RigidTransform& device_to_world, const DepthNoiseModel& noise);

inline constexpr double kDefaultDiscontinuity = 0.05;

/// Grid triangulation of valid depth pixels in the device frame. Each 2x2
/// pixel quad yields up to two triangles; triangles touching an invalid pixel
/// or whose vertex depths differ by more than `max_depth_jump` are dropped.
TriangleMesh reconstruct_mesh(const DepthImage& depth, const PinholeDevice& device,
                              double max_depth_jump = kDefaultDiscontinuity);

/// Height-field sheet of nx x ny quads spanning `size` in the xy plane of
/// `pose`, displaced along local z by amplitude * sin(kx x) * cos(ky y).
TriangleMesh make_displaced_sheet(const RigidTransform& pose, const Vec2& size, int nx, int ny,
                                  double amplitude, const Vec2& wave_number);

}  // namespace air
