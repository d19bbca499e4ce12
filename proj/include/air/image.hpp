#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "air/geometry.hpp"

namespace air {

using Rgb = std::array<std::uint8_t, 3>;

/// 8-bit RGB raster, row-major, pixel (u, v) with v growing downward.
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, Rgb fill = {0, 0, 0});

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }

  Rgb& at(int u, int v) { return pixels_[static_cast<std::size_t>(v) * width_ + u]; }
  const Rgb& at(int u, int v) const { return pixels_[static_cast<std::size_t>(v) * width_ + u]; }
  const std::vector<Rgb>& pixels() const { return pixels_; }

  /// Bilinear sample at continuous pixel coordinates (integers are texel
  /// centers); texels outside the image read as `border`. Coordinates outside
  /// the image footprint return the border color. Channels in [0, 255].
  Vec3 sample_bilinear(const Vec2& p, const Rgb& border = {0, 0, 0}) const;

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Rgb> pixels_;
};

Rgb to_rgb(const Vec3& value);

/// Binary PPM (P6, maxval 255).
void write_ppm(const RasterImage& image, const std::filesystem::path& path);
RasterImage read_ppm(const std::filesystem::path& path);

/// Whether PNG output was compiled in.
bool png_supported();
/// Throws io when PNG support is not compiled in.
void write_png(const RasterImage& image, const std::filesystem::path& path);

/// Draws a filled square marker of side 2 * radius + 1 centered on a pixel.
void draw_marker(RasterImage& image, const Vec2& center, int radius, const Rgb& color);

}  // namespace air
