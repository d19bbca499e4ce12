#include "air/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <string>

#include "air/error.hpp"

#ifdef AIR_HAVE_PNG
#include <png.h>
#endif

namespace air {

RasterImage::RasterImage(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::invalid_argument, "image dimensions must be positive");
  }
  pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

Vec3 RasterImage::sample_bilinear(const Vec2& p, const Rgb& border) const {
  const Vec3 b(border[0], border[1], border[2]);
  if (!(p.x() >= -0.5 && p.x() < width_ - 0.5 && p.y() >= -0.5 && p.y() < height_ - 0.5)) return b;
  const double fx = std::floor(p.x());
  const double fy = std::floor(p.y());
  const double ax = p.x() - fx;
  const double ay = p.y() - fy;
  const int x0 = static_cast<int>(fx);
  const int y0 = static_cast<int>(fy);
  auto texel = [&](int u, int v) -> Vec3 {
    if (u < 0 || v < 0 || u >= width_ || v >= height_) return b;
    const Rgb& c = at(u, v);
    return Vec3(c[0], c[1], c[2]);
  };
  return (1.0 - ay) * ((1.0 - ax) * texel(x0, y0) + ax * texel(x0 + 1, y0)) +
         ay * ((1.0 - ax) * texel(x0, y0 + 1) + ax * texel(x0 + 1, y0 + 1));
}

Rgb to_rgb(const Vec3& v) {
  Rgb out;
  for (int k = 0; k < 3; ++k) {
    out[k] = static_cast<std::uint8_t>(std::clamp(std::lround(v[k]), 0L, 255L));
  }
  return out;
}

void write_ppm(const RasterImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot open " + path.string() + " for writing");
  out << "P6\n" << image.width() << ' ' << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels().data()),
            static_cast<std::streamsize>(image.pixels().size() * 3));
  if (!out) throw Error(ErrorCode::io, "failed writing " + path.string());
}

RasterImage read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  auto next_token = [&]() {
    std::string tok;
    while (in) {
      const int c = in.peek();
      if (c == '#') {
        std::string comment;
        std::getline(in, comment);
      } else if (std::isspace(c)) {
        in.get();
      } else {
        break;
      }
    }
    in >> tok;
    return tok;
  };
  if (next_token() != "P6") throw Error(ErrorCode::schema, path.string() + ": not a binary PPM");
  int w = 0;
  int h = 0;
  int maxval = 0;
  try {
    w = std::stoi(next_token());
    h = std::stoi(next_token());
    maxval = std::stoi(next_token());
  } catch (const std::exception&) {
    throw Error(ErrorCode::schema, path.string() + ": malformed PPM header");
  }
  if (maxval != 255 || w <= 0 || h <= 0) {
    throw Error(ErrorCode::schema, path.string() + ": only 8-bit PPM is supported");
  }
  in.get();
  RasterImage img(w, h);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      in.read(reinterpret_cast<char*>(img.at(u, v).data()), 3);
    }
  }
  if (!in) throw Error(ErrorCode::schema, path.string() + ": truncated pixel data");
  return img;
}

bool png_supported() {
#ifdef AIR_HAVE_PNG
  return true;
#else
  return false;
#endif
}

void write_png(const RasterImage& image, const std::filesystem::path& path) {
#ifdef AIR_HAVE_PNG
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width());
  png.height = static_cast<png_uint_32>(image.height());
  png.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&png, path.string().c_str(), 0, image.pixels().data(), 0, nullptr)) {
    throw Error(ErrorCode::io, "failed writing " + path.string() + ": " + png.message);
  }
#else
  (void)image;
  throw Error(ErrorCode::io, "PNG support not built; cannot write " + path.string());
#endif
}

void draw_marker(RasterImage& image, const Vec2& center, int radius, const Rgb& color) {
  const int cu = static_cast<int>(std::lround(center.x()));
  const int cv = static_cast<int>(std::lround(center.y()));
  for (int v = cv - radius; v <= cv + radius; ++v) {
    for (int u = cu - radius; u <= cu + radius; ++u) {
      if (u >= 0 && v >= 0 && u < image.width() && v < image.height()) image.at(u, v) = color;
    }
  }
}

}  // namespace air
