#include "tvg/image_ops.hpp"

#include <algorithm>
#include <cmath>

#include "tvg/errors.hpp"

namespace tvg {

namespace {

// Source coordinate for a destination pixel center, clamped to the image.
inline double src_coord(int dst, int dst_size, int src_size) {
  double scale = static_cast<double>(src_size) / static_cast<double>(dst_size);
  double c = (static_cast<double>(dst) + 0.5) * scale - 0.5;
  return std::clamp(c, 0.0, static_cast<double>(src_size - 1));
}

}  // namespace

FrameSample resize_bilinear(const FrameSample& src, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1) throw Error("resize target must be at least 1x1");
  if (src.width < 1 || src.height < 1 || src.pixels.size() != src.pixel_count() * 3)
    throw Error("resize source frame is malformed");

  FrameSample dst;
  dst.index = src.index;
  dst.timestamp_s = src.timestamp_s;
  dst.width = out_w;
  dst.height = out_h;
  dst.pixels.resize(static_cast<std::size_t>(out_w) * out_h * 3);

  for (int y = 0; y < out_h; ++y) {
    double fy = src_coord(y, out_h, src.height);
    int y0 = static_cast<int>(fy);
    int y1 = std::min(y0 + 1, src.height - 1);
    double wy = fy - y0;
    for (int x = 0; x < out_w; ++x) {
      double fx = src_coord(x, out_w, src.width);
      int x0 = static_cast<int>(fx);
      int x1 = std::min(x0 + 1, src.width - 1);
      double wx = fx - x0;
      for (int c = 0; c < 3; ++c) {
        auto at = [&](int xx, int yy) {
          return static_cast<double>(
              src.pixels[(static_cast<std::size_t>(yy) * src.width + xx) * 3 + c]);
        };
        double top = at(x0, y0) * (1.0 - wx) + at(x1, y0) * wx;
        double bot = at(x0, y1) * (1.0 - wx) + at(x1, y1) * wx;
        double v = top * (1.0 - wy) + bot * wy;
        dst.pixels[(static_cast<std::size_t>(y) * out_w + x) * 3 + c] =
            static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
    }
  }
  return dst;
}

std::vector<double> to_grayscale(const FrameSample& frame) {
  std::vector<double> gray(frame.pixel_count());
  for (std::size_t i = 0; i < gray.size(); ++i) {
    double r = frame.pixels[i * 3 + 0];
    double g = frame.pixels[i * 3 + 1];
    double b = frame.pixels[i * 3 + 2];
    gray[i] = 0.299 * r + 0.587 * g + 0.114 * b;
  }
  return gray;
}

std::vector<double> resize_gray_bilinear(const std::vector<double>& src,
                                         int src_w, int src_h,
                                         int out_w, int out_h) {
  if (out_w < 1 || out_h < 1) throw Error("resize target must be at least 1x1");
  if (src.size() != static_cast<std::size_t>(src_w) * src_h)
    throw Error("gray buffer size does not match dimensions");

  std::vector<double> dst(static_cast<std::size_t>(out_w) * out_h);
  for (int y = 0; y < out_h; ++y) {
    double fy = src_coord(y, out_h, src_h);
    int y0 = static_cast<int>(fy);
    int y1 = std::min(y0 + 1, src_h - 1);
    double wy = fy - y0;
    for (int x = 0; x < out_w; ++x) {
      double fx = src_coord(x, out_w, src_w);
      int x0 = static_cast<int>(fx);
      int x1 = std::min(x0 + 1, src_w - 1);
      double wx = fx - x0;
      auto at = [&](int xx, int yy) { return src[static_cast<std::size_t>(yy) * src_w + xx]; };
      double top = at(x0, y0) * (1.0 - wx) + at(x1, y0) * wx;
      double bot = at(x0, y1) * (1.0 - wx) + at(x1, y1) * wx;
      dst[static_cast<std::size_t>(y) * out_w + x] = top * (1.0 - wy) + bot * wy;
    }
  }
  return dst;
}

}  // namespace tvg
