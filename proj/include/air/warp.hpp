#pragma once

#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "air/image.hpp"
#include "air/mesh.hpp"
#include "air/scene.hpp"
#include "air/upr.hpp"

namespace air {

/// Black and white squares centered in the pass-1 raster; everything outside
/// the board is `surround`.
struct CheckerPattern {
  int rows = 6;  // squares
  int cols = 9;
  int square_px = 100;
  Rgb dark{0, 0, 0};
  Rgb light{255, 255, 255};
  Rgb surround{128, 128, 128};

  /// Top-left board corner in pixel-edge coordinates.
  Vec2 origin(int width, int height) const;
  /// Inner corners, index i * (cols - 1) + j for i < rows - 1, j < cols - 1,
  /// in pixel-center raster coordinates.
  std::vector<std::pair<int, Vec2>> inner_corners(int width, int height) const;
};

/// 360 x 180 degree panorama; longitude atan2(x, z) in world, latitude
/// asin(y) with y pointing down.
struct EquirectContent {
  RasterImage panorama;
};

struct ColoredMesh {
  TriangleMesh mesh;  // world frame
  Rgb color{255, 255, 255};
};

struct MeshSetContent {
  std::vector<ColoredMesh> meshes;
  Rgb background{0, 0, 0};
};

using Content = std::variant<CheckerPattern, EquirectContent, MeshSetContent>;

/// Reconstructed real-world surface in world coordinates.
struct WorldGeometry {
  std::shared_ptr<const MeshBvh> bvh;

  static WorldGeometry from_mesh(TriangleMesh world_mesh);
  bool empty() const { return !bvh || bvh->mesh().empty(); }
  std::optional<MeshHit> intersect(const Vec3& origin, const Vec3& dir) const;
};

/// Geometry from one depth frame lifted to world coordinates through the
/// front camera pose (the motor rotation).
WorldGeometry geometry_from_depth(const DepthImage& depth, const PinholeDevice& device,
                                  const RigidTransform& front_to_world,
                                  double max_depth_jump = kDefaultDiscontinuity);

/// A projector (or any emitting device) placed in the world.
struct Emitter {
  PinholeDevice device;
  RigidTransform to_world;
};

/// Pass 1: the content as the user should see it, rastered on the viewport.
RasterImage render_user_view(const Content& content, const UprMatrix& upr, const Viewport& viewport);

/// Pass 2: for every projector pixel, cast its ray into `geometry`, map the
/// hit through A_upr and the viewport, and sample pass 1 bilinearly. Misses
/// and out-of-texture lookups are black.
RasterImage warp_to_projector(const WorldGeometry& geometry, const UprMatrix& upr,
                              const Viewport& viewport, const RasterImage& pass1,
                              const Emitter& projector);

/// Uncorrected output: pass 1 stretched onto the projector raster.
RasterImage passthrough_to_projector(const RasterImage& pass1, const PinholeDevice& projector);

/// Pass-1 raster position -> projector pixel for the uncorrected output.
Vec2 passthrough_pixel(const Vec2& pass1_pixel, int pass1_width, int pass1_height,
                       const PinholeDevice& projector);

struct Lighting {
  double ambient = 0.5;  // fraction of albedo visible without projector light
};

/// What a camera sees when `framebuffer` is projected into `scene`: albedo
/// times (ambient + projector light) where the projector reaches the surface
/// unoccluded, albedo times ambient elsewhere, black on a miss.
RasterImage simulate_projection_and_view(const Scene& scene, const RasterImage& framebuffer,
                                         const Emitter& projector, const ViewCamera& viewer,
                                         const Lighting& lighting = {});

enum class Correction { on, off };

/// The physical side of a projection: the true scene and the true projector.
struct PhysicalWorld {
  const Scene* scene = nullptr;
  Emitter projector;
};

struct PropagatedCorner {
  int index = 0;
  std::optional<Vec2> pixel;  // user-view pixel; nullopt when unresolved
};

/// Analytic path of pattern corners through pass 2 and the physical world to
/// the user's eye camera. `model_projector` is what the warp believes (the
/// calibration); `world` is where light actually goes.
std::vector<PropagatedCorner> propagate_corners(std::span<const std::pair<int, Vec2>> corners,
                                                const WorldGeometry& geometry,
                                                const UprMatrix& upr, const Viewport& viewport,
                                                const Emitter& model_projector,
                                                const PhysicalWorld& world,
                                                const ViewCamera& viewer, Correction correction);

/// Pinhole projection that reports nullopt instead of throwing for points
/// behind the device or outside the image.
std::optional<Vec2> project_visible(const PinholeDevice& device, const RigidTransform& to_world,
                                    const Vec3& world_point);

}  // namespace air
