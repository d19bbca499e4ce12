#include "air/scene.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "air/error.hpp"
#include "air/parallel.hpp"

namespace air {

namespace {

std::pair<Vec3, Vec3> plane_axes(const Vec3& n) {
  const Vec3 helper = std::abs(n.y()) < 0.9 ? Vec3::UnitY() : Vec3::UnitX();
  const Vec3 u = helper.cross(n).normalized();
  return {u, n.cross(u)};
}

std::optional<Hit> intersect_plane(const PlaneShape& plane, const Vec3& o, const Vec3& d,
                                   double t_min) {
  const Vec3 n = plane.normal.normalized();
  const double denom = n.dot(d);
  if (std::abs(denom) < 1e-12) return std::nullopt;
  const double t = n.dot(plane.point - o) / denom;
  if (!(t > t_min)) return std::nullopt;
  const Vec3 p = o + t * d;
  if (plane.half_extent.x() > 0.0 || plane.half_extent.y() > 0.0) {
    const auto [u, v] = plane_axes(n);
    const Vec3 r = p - plane.point;
    if (plane.half_extent.x() > 0.0 && std::abs(r.dot(u)) > plane.half_extent.x()) {
      return std::nullopt;
    }
    if (plane.half_extent.y() > 0.0 && std::abs(r.dot(v)) > plane.half_extent.y()) {
      return std::nullopt;
    }
  }
  return Hit{p, n, 0, t};
}

std::optional<Hit> intersect_box(const BoxShape& box, const Vec3& o, const Vec3& d, double t_min) {
  const Mat3 rt = box.pose.rotation.transpose();
  const Vec3 lo = rt * (o - box.pose.translation);
  const Vec3 ld = rt * d;
  const Vec3 half = 0.5 * box.dimensions;
  double t_enter = -1e300;
  double t_exit = 1e300;
  int enter_axis = 0;
  int exit_axis = 0;
  for (int k = 0; k < 3; ++k) {
    if (std::abs(ld[k]) < 1e-300) {
      if (std::abs(lo[k]) > half[k]) return std::nullopt;
      continue;
    }
    double t0 = (-half[k] - lo[k]) / ld[k];
    double t1 = (half[k] - lo[k]) / ld[k];
    if (t0 > t1) std::swap(t0, t1);
    if (t0 > t_enter) {
      t_enter = t0;
      enter_axis = k;
    }
    if (t1 < t_exit) {
      t_exit = t1;
      exit_axis = k;
    }
  }
  if (t_enter > t_exit) return std::nullopt;
  double t = t_enter;
  int axis = enter_axis;
  if (!(t > t_min)) {
    t = t_exit;
    axis = exit_axis;
    if (!(t > t_min)) return std::nullopt;
  }
  const Vec3 lp = lo + t * ld;
  Vec3 ln = Vec3::Zero();
  ln[axis] = lp[axis] > 0.0 ? 1.0 : -1.0;
  return Hit{o + t * d, box.pose.rotation * ln, 0, t};
}

std::optional<Hit> intersect_sphere(const SphereShape& s, const Vec3& o, const Vec3& d,
                                    double t_min) {
  const Vec3 oc = o - s.center;
  const double b = oc.dot(d);
  const double c = oc.squaredNorm() - s.radius * s.radius;
  const double disc = b * b - c;
  if (disc < 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  double t = -b - root;
  if (!(t > t_min)) t = -b + root;
  if (!(t > t_min)) return std::nullopt;
  const Vec3 p = o + t * d;
  return Hit{p, (p - s.center) / s.radius, 0, t};
}

std::optional<Hit> intersect_cylinder(const CylinderShape& cyl, const Vec3& o, const Vec3& d,
                                      double t_min) {
  const Mat3 rt = cyl.pose.rotation.transpose();
  const Vec3 lo = rt * (o - cyl.pose.translation);
  const Vec3 ld = rt * d;
  const double half_h = 0.5 * cyl.height;
  const double r2 = cyl.radius * cyl.radius;
  double best = 1e300;
  Vec3 best_n = Vec3::Zero();

  const double a = ld.x() * ld.x() + ld.y() * ld.y();
  if (a > 1e-300) {
    const double b = lo.x() * ld.x() + lo.y() * ld.y();
    const double c = lo.x() * lo.x() + lo.y() * lo.y() - r2;
    const double disc = b * b - a * c;
    if (disc >= 0.0) {
      const double root = std::sqrt(disc);
      for (double t : {(-b - root) / a, (-b + root) / a}) {
        if (t > t_min && t < best) {
          const Vec3 p = lo + t * ld;
          if (std::abs(p.z()) <= half_h) {
            best = t;
            best_n = Vec3(p.x(), p.y(), 0.0) / cyl.radius;
          }
        }
      }
    }
  }
  if (std::abs(ld.z()) > 1e-300) {
    for (double zc : {-half_h, half_h}) {
      const double t = (zc - lo.z()) / ld.z();
      if (t > t_min && t < best) {
        const Vec3 p = lo + t * ld;
        if (p.x() * p.x() + p.y() * p.y() <= r2) {
          best = t;
          best_n = Vec3(0.0, 0.0, zc > 0.0 ? 1.0 : -1.0);
        }
      }
    }
  }
  if (best >= 1e300) return std::nullopt;
  return Hit{o + best * d, cyl.pose.rotation * best_n, 0, best};
}

std::optional<Hit> intersect_mesh(const MeshShape& m, const Vec3& o, const Vec3& d, double t_min) {
  if (!m.bvh) return std::nullopt;
  const auto hit = m.bvh->intersect(o, d, t_min);
  if (!hit) return std::nullopt;
  return Hit{o + hit->t * d, hit->normal, 0, hit->t};
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

MeshShape make_mesh_shape(TriangleMesh mesh) {
  return MeshShape{std::make_shared<const MeshBvh>(std::move(mesh))};
}

std::optional<Hit> intersect(const Surface& surface, const Vec3& origin, const Vec3& dir,
                             double t_min) {
  auto hit = std::visit(
      [&](const auto& shape) -> std::optional<Hit> {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, PlaneShape>) return intersect_plane(shape, origin, dir, t_min);
        if constexpr (std::is_same_v<T, BoxShape>) return intersect_box(shape, origin, dir, t_min);
        if constexpr (std::is_same_v<T, SphereShape>) return intersect_sphere(shape, origin, dir, t_min);
        if constexpr (std::is_same_v<T, CylinderShape>) {
          return intersect_cylinder(shape, origin, dir, t_min);
        }
        if constexpr (std::is_same_v<T, MeshShape>) return intersect_mesh(shape, origin, dir, t_min);
      },
      surface.shape);
  if (hit) hit->surface_id = surface.id;
  return hit;
}

void CheckerboardTarget::validate() const {
  if (rows < 2 || cols < 2) {
    throw Error(ErrorCode::invalid_argument, "checkerboard needs at least 2x2 inner corners");
  }
  if (!(square_size > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "checkerboard square size must be positive");
  }
}

Vec3 CheckerboardTarget::corner_world(int index) const {
  const int i = index / cols;
  const int j = index % cols;
  return pose.apply(Vec3(j * square_size, i * square_size, 0.0));
}

Scene::Scene(std::vector<Surface> surfaces, std::vector<CheckerboardTarget> targets)
    : surfaces_(std::move(surfaces)), targets_(std::move(targets)) {
  for (const auto& s : surfaces_) {
    std::visit(
        [](const auto& shape) {
          using T = std::decay_t<decltype(shape)>;
          auto fail = [](const char* what) { throw Error(ErrorCode::invalid_argument, what); };
          if constexpr (std::is_same_v<T, PlaneShape>) {
            if (!(shape.normal.norm() > 0.0)) fail("plane normal must be non-zero");
          } else if constexpr (std::is_same_v<T, BoxShape>) {
            if (!(shape.dimensions.minCoeff() > 0.0)) fail("box dimensions must be positive");
          } else if constexpr (std::is_same_v<T, SphereShape>) {
            if (!(shape.radius > 0.0)) fail("sphere radius must be positive");
          } else if constexpr (std::is_same_v<T, CylinderShape>) {
            if (!(shape.radius > 0.0 && shape.height > 0.0)) fail("cylinder size must be positive");
          } else {
            if (!shape.bvh) fail("mesh surface without geometry");
          }
        },
        s.shape);
  }
  std::vector<int> ids;
  for (const auto& s : surfaces_) ids.push_back(s.id);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw Error(ErrorCode::invalid_argument, "surface ids must be unique");
  }
  for (const auto& t : targets_) t.validate();
}

const Surface* Scene::find(int id) const {
  for (const auto& s : surfaces_) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

std::optional<Hit> Scene::raycast(const Vec3& origin, const Vec3& dir) const {
  std::optional<Hit> best;
  for (const auto& s : surfaces_) {
    auto hit = intersect(s, origin, dir, 1e-6);
    if (hit && (!best || hit->t < best->t)) best = hit;
  }
  return best;
}

DepthImage::DepthImage(int w, int h)
    : width(w), height(h), depth(static_cast<std::size_t>(w) * h, 0.0),
      valid(static_cast<std::size_t>(w) * h, 0) {}

std::size_t DepthImage::valid_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{1}));
}

void DepthNoiseModel::validate() const {
  if (!(sigma >= 0.0)) throw Error(ErrorCode::invalid_argument, "depth noise sigma must be >= 0");
  if (!(gamma_full_dropout >= 0.0 && gamma_full_dropout < gamma_no_dropout &&
        gamma_no_dropout <= 90.0)) {
    throw Error(ErrorCode::invalid_argument,
                "dropout angles must satisfy 0 <= full < none <= 90 degrees");
  }
}

double DepthNoiseModel::dropout_probability(double gamma_deg) const {
  if (!dropout) return 0.0;
  if (gamma_deg < gamma_full_dropout) return 1.0;
  if (gamma_deg >= gamma_no_dropout) return 0.0;
  return (gamma_no_dropout - gamma_deg) / (gamma_no_dropout - gamma_full_dropout);
}

DepthNoiseModel DepthNoiseModel::ideal() {
  DepthNoiseModel m;
  m.dropout = false;
  return m;
}

double grazing_angle_deg(const Vec3& ray_dir, const Vec3& normal) {
  const double s = std::abs(ray_dir.normalized().dot(normal.normalized()));
  return rad2deg(std::asin(std::min(1.0, s)));
}

DepthImage sense_depth(const Scene& scene, const PinholeDevice& device,
                       const RigidTransform& device_to_world, const DepthNoiseModel& noise) {
  device.validate();
  noise.validate();
  DepthImage out(device.width, device.height);
  parallel_rows(device.height, [&](int v) {
    std::mt19937_64 rng(splitmix64(noise.seed ^ splitmix64(static_cast<std::uint64_t>(v) + 1)));
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int u = 0; u < device.width; ++u) {
      // Two draws per pixel regardless of outcome, so a pixel's randomness
      // does not depend on its neighbours.
      const double drop_draw = uniform(rng);
      const double noise_draw = gauss(rng);
      const Vec3 ray_dev = pixel_ray(device, Vec2(u, v));
      const Vec3 ray_world = device_to_world.apply_direction(ray_dev);
      const auto hit = scene.raycast(device_to_world.translation, ray_world);
      if (!hit) continue;
      const double gamma = grazing_angle_deg(ray_world, hit->normal);
      if (drop_draw < noise.dropout_probability(gamma)) continue;
      const double z = hit->t * ray_dev.z() + noise.sigma * noise_draw;
      if (!(z > 0.0)) continue;
      const std::size_t idx = out.index(u, v);
      out.depth[idx] = z;
      out.valid[idx] = 1;
    }
  });
  return out;
}

TriangleMesh reconstruct_mesh(const DepthImage& depth, const PinholeDevice& device,
                              double max_depth_jump) {
  if (depth.width != device.width || depth.height != device.height) {
    throw Error(ErrorCode::invalid_argument, "depth image size does not match the device");
  }
  TriangleMesh mesh;
  std::vector<int> vertex_of(depth.depth.size(), -1);
  for (int v = 0; v < depth.height; ++v) {
    for (int u = 0; u < depth.width; ++u) {
      const std::size_t idx = depth.index(u, v);
      if (!depth.valid[idx]) continue;
      vertex_of[idx] = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back(backproject(device, Vec2(u, v), depth.depth[idx]));
    }
  }
  auto try_add = [&](std::size_t a, std::size_t b, std::size_t c) {
    if (vertex_of[a] < 0 || vertex_of[b] < 0 || vertex_of[c] < 0) return;
    const double za = depth.depth[a];
    const double zb = depth.depth[b];
    const double zc = depth.depth[c];
    const double jump = std::max({std::abs(za - zb), std::abs(zb - zc), std::abs(za - zc)});
    if (jump > max_depth_jump) return;
    mesh.faces.push_back({vertex_of[a], vertex_of[b], vertex_of[c]});
  };
  for (int v = 0; v + 1 < depth.height; ++v) {
    for (int u = 0; u + 1 < depth.width; ++u) {
      const std::size_t p00 = depth.index(u, v);
      const std::size_t p10 = depth.index(u + 1, v);
      const std::size_t p01 = depth.index(u, v + 1);
      const std::size_t p11 = depth.index(u + 1, v + 1);
      try_add(p00, p01, p10);
      try_add(p10, p01, p11);
    }
  }
  return mesh;
}

TriangleMesh make_displaced_sheet(const RigidTransform& pose, const Vec2& size, int nx, int ny,
                                  double amplitude, const Vec2& wave_number) {
  if (nx < 1 || ny < 1) throw Error(ErrorCode::invalid_argument, "sheet needs at least one quad");
  TriangleMesh mesh;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      const double x = (static_cast<double>(i) / nx - 0.5) * size.x();
      const double y = (static_cast<double>(j) / ny - 0.5) * size.y();
      const double z = amplitude * std::sin(wave_number.x() * x) * std::cos(wave_number.y() * y);
      mesh.vertices.push_back(pose.apply(Vec3(x, y, z)));
    }
  }
  const int stride = nx + 1;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = j * stride + i;
      mesh.faces.push_back({a, a + stride, a + 1});
      mesh.faces.push_back({a + 1, a + stride, a + stride + 1});
    }
  }
  return mesh;
}

}  // namespace air
