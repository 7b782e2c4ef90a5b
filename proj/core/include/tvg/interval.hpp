#pragma once

namespace tvg {

// Closed temporal interval in seconds.
struct Interval {
  double start_s = 0.0;
  double end_s = 0.0;

  double length() const { return end_s - start_s; }
};

// Temporal intersection over union; 0 when the union has zero length.
double iou(const Interval& a, const Interval& b);

}  // namespace tvg
