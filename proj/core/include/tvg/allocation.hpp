#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tvg/frame.hpp"
#include "tvg/salience.hpp"

namespace tvg {

// Vision tokenizer geometry: frames are cut into patch x patch cells and
// merge x merge cells collapse into one visual token.
struct TokenizerGeometry {
  int patch = 28;
  int merge = 2;
};

struct FrameAllocation {
  int frame_index = 0;
  bool is_key = false;
  double scale = 1.0;
  int out_width = 0;
  int out_height = 0;
  long long tokens = 0;
};

struct AllocationPlan {
  long long budget = 0;
  std::vector<FrameAllocation> per_frame;

  long long total_tokens() const;
};

struct AllocationParams {
  double t_key = 0.15;   // threshold on normalized pair scores
  double r_l = 4.0;      // scale for low-salience frames
  double r_s = 2.0;      // scale for key frames, must stay below r_l
  bool promote = false;  // spend leftover budget upgrading non-key frames
};

long long token_count(int width, int height, const TokenizerGeometry& geom);

// Output dimensions for a frame shrunk by `scale` and snapped down to the
// patch grid (at least one patch per side).
std::pair<int, int> scaled_dims(int width, int height, double scale,
                                const TokenizerGeometry& geom);

FrameSample resize_frame(const FrameSample& frame, double scale,
                         const TokenizerGeometry& geom);

// Keys frame i when the larger of its adjacent pair scores crosses t_key,
// then reconciles the token budget by demoting the least salient key frames.
// Throws InfeasibleError when the budget cannot fit all frames at r_l.
AllocationPlan build_plan(const SalienceSeries& series,
                          const std::vector<FrameSample>& frames,
                          long long budget, const AllocationParams& params,
                          const TokenizerGeometry& geom = {});

void write_plan_csv(std::ostream& out, const AllocationPlan& plan);
AllocationPlan read_plan_csv(std::istream& in);

void save_plan(const std::string& path, const AllocationPlan& plan);
AllocationPlan load_plan(const std::string& path);

}  // namespace tvg
