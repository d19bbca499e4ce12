#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "air/geometry.hpp"

namespace air {

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;

  bool empty() const { return faces.empty(); }
  /// Throws invalid_argument if a face references a missing vertex or a
  /// vertex is not finite.
  void validate() const;
};

TriangleMesh transformed(const TriangleMesh& mesh, const RigidTransform& transform);

/// Splits every triangle into four by edge midpoints.
TriangleMesh subdivided(const TriangleMesh& mesh);

struct MeshHit {
  double t = 0.0;
  int face = -1;
  Vec3 normal;  // unit geometric normal of the hit face
};

/// Two-sided Moller-Trumbore test. Returns t (ray parameter) on hit.
std::optional<double> intersect_triangle(const Vec3& origin, const Vec3& dir, const Vec3& a,
                                         const Vec3& b, const Vec3& c);

/// Bounding volume hierarchy over a triangle mesh for nearest-hit queries.
/// Holds its own copy of the mesh; immutable once built.
class MeshBvh {
 public:
  MeshBvh() = default;
  explicit MeshBvh(TriangleMesh mesh);

  const TriangleMesh& mesh() const { return mesh_; }

  /// Nearest hit with t in (t_min, t_max).
  std::optional<MeshHit> intersect(const Vec3& origin, const Vec3& dir, double t_min = 1e-6,
                                   double t_max = 1e300) const;

 private:
  struct Node {
    Eigen::Vector3d lo;
    Eigen::Vector3d hi;
    std::uint32_t first = 0;  // child index (inner) or first primitive (leaf)
    std::uint32_t count = 0;  // 0 for inner nodes
  };

  std::uint32_t build(std::uint32_t begin, std::uint32_t end, std::vector<Vec3>& centroids);

  TriangleMesh mesh_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace air
