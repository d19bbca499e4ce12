#include "air/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>

#include "air/error.hpp"

namespace air {

void TriangleMesh::validate() const {
  const int n = static_cast<int>(vertices.size());
  for (const auto& v : vertices) {
    if (!v.allFinite()) throw Error(ErrorCode::invalid_argument, "mesh vertex is not finite");
  }
  for (const auto& f : faces) {
    for (int idx : f) {
      if (idx < 0 || idx >= n) {
        throw Error(ErrorCode::invalid_argument, "mesh face references a missing vertex");
      }
    }
  }
}

TriangleMesh transformed(const TriangleMesh& mesh, const RigidTransform& transform) {
  TriangleMesh out;
  out.faces = mesh.faces;
  out.vertices.reserve(mesh.vertices.size());
  for (const auto& v : mesh.vertices) out.vertices.push_back(transform.apply(v));
  return out;
}

TriangleMesh subdivided(const TriangleMesh& mesh) {
  TriangleMesh out;
  out.vertices = mesh.vertices;
  std::map<std::pair<int, int>, int> midpoints;
  auto midpoint = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = midpoints.find(key);
    if (it != midpoints.end()) return it->second;
    const int idx = static_cast<int>(out.vertices.size());
    out.vertices.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
    midpoints.emplace(key, idx);
    return idx;
  };
  out.faces.reserve(mesh.faces.size() * 4);
  for (const auto& f : mesh.faces) {
    const int ab = midpoint(f[0], f[1]);
    const int bc = midpoint(f[1], f[2]);
    const int ca = midpoint(f[2], f[0]);
    out.faces.push_back({f[0], ab, ca});
    out.faces.push_back({ab, f[1], bc});
    out.faces.push_back({ca, bc, f[2]});
    out.faces.push_back({ab, bc, ca});
  }
  return out;
}

std::optional<double> intersect_triangle(const Vec3& origin, const Vec3& dir, const Vec3& a,
                                         const Vec3& b, const Vec3& c) {
  const Vec3 e1 = b - a;
  const Vec3 e2 = c - a;
  const Vec3 p = dir.cross(e2);
  const double det = e1.dot(p);
  if (std::abs(det) < 1e-18) return std::nullopt;
  const double inv = 1.0 / det;
  const Vec3 s = origin - a;
  const double u = s.dot(p) * inv;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  const Vec3 q = s.cross(e1);
  const double v = dir.dot(q) * inv;
  if (v < 0.0 || u + v > 1.0) return std::nullopt;
  return e2.dot(q) * inv;
}

namespace {

constexpr std::uint32_t kLeafSize = 4;

bool slab_hit(const Vec3& lo, const Vec3& hi, const Vec3& origin, const Vec3& inv_dir,
              double t_min, double t_max) {
  for (int k = 0; k < 3; ++k) {
    double t0 = (lo[k] - origin[k]) * inv_dir[k];
    double t1 = (hi[k] - origin[k]) * inv_dir[k];
    if (t0 > t1) std::swap(t0, t1);
    // NaN from 0 * inf (ray on the slab boundary) keeps the box.
    if (t0 > t_min) t_min = t0;
    if (t1 < t_max) t_max = t1;
    if (t_min > t_max) return false;
  }
  return true;
}

}  // namespace

MeshBvh::MeshBvh(TriangleMesh mesh) : mesh_(std::move(mesh)) {
  mesh_.validate();
  const auto n = static_cast<std::uint32_t>(mesh_.faces.size());
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0u);
  if (n == 0) return;
  std::vector<Vec3> centroids(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto& f = mesh_.faces[i];
    centroids[i] = (mesh_.vertices[f[0]] + mesh_.vertices[f[1]] + mesh_.vertices[f[2]]) / 3.0;
  }
  nodes_.reserve(2 * n / kLeafSize + 1);
  build(0, n, centroids);
}

std::uint32_t MeshBvh::build(std::uint32_t begin, std::uint32_t end, std::vector<Vec3>& centroids) {
  const auto index = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back({});
  Vec3 lo = Vec3::Constant(1e300);
  Vec3 hi = Vec3::Constant(-1e300);
  Vec3 clo = lo;
  Vec3 chi = hi;
  for (std::uint32_t i = begin; i < end; ++i) {
    const auto& f = mesh_.faces[order_[i]];
    for (int k = 0; k < 3; ++k) {
      lo = lo.cwiseMin(mesh_.vertices[f[k]]);
      hi = hi.cwiseMax(mesh_.vertices[f[k]]);
    }
    clo = clo.cwiseMin(centroids[order_[i]]);
    chi = chi.cwiseMax(centroids[order_[i]]);
  }
  nodes_[index].lo = lo;
  nodes_[index].hi = hi;
  if (end - begin <= kLeafSize) {
    nodes_[index].first = begin;
    nodes_[index].count = end - begin;
    return index;
  }
  int axis = 0;
  const Vec3 extent = chi - clo;
  if (extent.y() > extent[axis]) axis = 1;
  if (extent.z() > extent[axis]) axis = 2;
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     return centroids[a][axis] < centroids[b][axis];
                   });
  build(begin, mid, centroids);  // left child lands at index + 1
  const std::uint32_t right = build(mid, end, centroids);
  nodes_[index].first = right;
  nodes_[index].count = 0;
  return index;
}

std::optional<MeshHit> MeshBvh::intersect(const Vec3& origin, const Vec3& dir, double t_min,
                                          double t_max) const {
  if (nodes_.empty()) return std::nullopt;
  const Vec3 inv_dir(1.0 / dir.x(), 1.0 / dir.y(), 1.0 / dir.z());
  double best_t = t_max;
  int best_face = -1;
  std::uint32_t stack[64];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (!slab_hit(node.lo, node.hi, origin, inv_dir, t_min, best_t)) continue;
    if (node.count > 0) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        const auto& f = mesh_.faces[order_[i]];
        const auto t = intersect_triangle(origin, dir, mesh_.vertices[f[0]], mesh_.vertices[f[1]],
                                          mesh_.vertices[f[2]]);
        if (t && *t > t_min && *t < best_t) {
          best_t = *t;
          best_face = static_cast<int>(order_[i]);
        }
      }
    } else {
      const auto self = static_cast<std::uint32_t>(&node - nodes_.data());
      stack[top++] = node.first;
      stack[top++] = self + 1;
    }
  }
  if (best_face < 0) return std::nullopt;
  const auto& f = mesh_.faces[best_face];
  const Vec3 n = (mesh_.vertices[f[1]] - mesh_.vertices[f[0]])
                     .cross(mesh_.vertices[f[2]] - mesh_.vertices[f[0]]);
  return MeshHit{best_t, best_face, n.normalized()};
}

}  // namespace air
