#pragma once

#include <vector>

#include "tvg/frame.hpp"

namespace tvg {

/// Bilinear resample to (out_w, out_h) with pixel-center alignment.
/// Index and timestamp are carried over unchanged.
FrameSample resize_bilinear(const FrameSample& src, int out_w, int out_h);

/// Rec.601 luma as doubles, row-major, one value per pixel.
std::vector<double> to_grayscale(const FrameSample& frame);

/// Bilinear resample of a single-channel double image.
std::vector<double> resize_gray_bilinear(const std::vector<double>& src,
                                         int src_w, int src_h,
                                         int out_w, int out_h);

}  // namespace tvg
