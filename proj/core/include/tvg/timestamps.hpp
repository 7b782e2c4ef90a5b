#pragma once

#include <string>
#include <vector>

#include "tvg/allocation.hpp"

namespace tvg {

// One fixed-width timestamp: zero-padded integer digits, a point, then
// frac_width fraction digits. Every timestamp aligned for the same video
// shares one text length, so lexicographic order equals numeric order.
struct AlignedTimestamp {
  double raw_s = 0.0;
  std::string text;
  int int_width = 1;
  int frac_width = 1;
};

struct PromptElement {
  enum class Kind { INSTRUCTION, TIMESTAMP, FRAME, QUERY };
  Kind kind = Kind::INSTRUCTION;
  std::string text;      // instruction, timestamp or query payload
  int frame_index = -1;  // FRAME elements only
  long long tokens = 0;  // FRAME elements only
};

struct PromptSequence {
  std::vector<PromptElement> elements;
  long long declared_tokens = 0;
};

// Widths come from the values after rounding, so a carry such as 9.96 -> 10.0
// still yields equal-length texts.
std::vector<AlignedTimestamp> align_timestamps(const std::vector<double>& seconds,
                                               int frac_width = 1);

// Ablation codec: plain zero-padded frame indices instead of second values.
std::vector<AlignedTimestamp> align_indices(const std::vector<int>& indices);

double parse_timestamp(const std::string& text);

// Interleaves instruction, (timestamp, frame) pairs in frame-index order, and
// the query. `aligned` is positional: aligned[i] annotates plan.per_frame[i].
PromptSequence build_prompt(const AllocationPlan& plan,
                            const std::vector<AlignedTimestamp>& aligned,
                            const std::string& instruction,
                            const std::string& query);

// Stable text form; frame placeholders render as "<frame:INDEX:TOKENS>".
std::string render_prompt_text(const PromptSequence& seq);

}  // namespace tvg
