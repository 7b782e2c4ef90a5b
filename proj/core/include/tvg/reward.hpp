#pragma once

#include <string>
#include <vector>

#include "tvg/interval.hpp"

namespace tvg {

struct MomentPrediction {
  std::vector<Interval> intervals;
  bool refused = false;
  std::string raw_text;
};

struct GroundTruthEntry {
  std::vector<Interval> windows;
  bool relevant = false;
};

struct RewardWeights {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
};

struct RewardBreakdown {
  double r_format = 0.0;
  double r_tvg = 0.0;
  double r_pir = 0.0;
  double r_total = 0.0;
  RewardWeights weights;
};

struct GroupAdvantages {
  std::vector<double> rewards;
  std::vector<double> advantages;
};

// Pulls every "[a, b]" pair with a <= b out of free text. When no pair
// survives, a bare "[]" or the phrase "no relevant" (case-insensitive) marks
// the response as a refusal. Total: malformed text parses to an empty,
// non-refused prediction.
MomentPrediction parse_response(const std::string& raw);

// 1 when the response commits to intervals or explicitly refuses; 0 for
// anything that does neither.
double format_reward(const MomentPrediction& pred);

struct PrecisionReward {
  double r_tvg = 0.0;
  double r_pir = 0.0;
};

// Relevant sample: matched-IoU sum under greedy one-to-one matching
// (highest IoU first, ties by earlier window start then lower prediction
// index) normalized by max(|pred|, |gt|). Irrelevant sample: gamma for a
// refusal, zero otherwise. At most one of the two terms is nonzero.
PrecisionReward precision_reward(const MomentPrediction& pred,
                                 const GroundTruthEntry& gt, double gamma);

RewardBreakdown total_reward(const MomentPrediction& pred,
                             const GroundTruthEntry& gt,
                             const RewardWeights& weights = {});

// Group-relative advantages: (r - mean) / population std; an all-equal group
// maps to all zeros. Requires at least 2 rewards.
GroupAdvantages group_advantages(const std::vector<double>& rewards);

}  // namespace tvg
