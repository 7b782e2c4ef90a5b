#pragma once

#include <cstdint>
#include <vector>

namespace tvg {

/// One sampled frame: row-major 8-bit RGB.
struct FrameSample {
  int index = 0;
  double timestamp_s = 0.0;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // size = width * height * 3

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
};

/// Per-pixel hue in degrees, [0, 360). Achromatic pixels carry hue 0.
struct HuePlane {
  int width = 0;
  int height = 0;
  std::vector<double> hue;  // size = width * height
};

/// Hue of one RGB triple (HSL/HSV hue; identical in both models).
/// max == min maps to 0 so histograms over flat regions are deterministic.
double rgb_hue(std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// Standard RGB -> HSL hue extraction. Total on valid frames.
HuePlane to_hue_plane(const FrameSample& frame);

}  // namespace tvg
