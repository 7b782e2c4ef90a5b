#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "tvg/dataset.hpp"
#include "tvg/metrics.hpp"
#include "tvg/reward.hpp"

namespace tvg {

// Categorical policy over {refuse} + a start x length interval grid, with one
// logit bank per perceived context (query relevant to the video or not).
// Action 0 refuses; action 1 + s*length_bins + l decodes to the interval
// [s*dur/S, min(dur, s*dur/S + l*dur/Lb)].
struct ToyPolicy {
  int start_bins = 20;
  int length_bins = 10;
  double temperature = 1.0;
  std::vector<double> relevant_logits;
  std::vector<double> irrelevant_logits;

  int action_count() const { return 1 + start_bins * length_bins; }
  const std::vector<double>& bank(bool relevant) const {
    return relevant ? relevant_logits : irrelevant_logits;
  }
};

ToyPolicy make_policy(int start_bins, int length_bins, double temperature);

std::vector<double> softmax(const std::vector<double>& logits, double temperature);

MomentPrediction decode_action(int action, double duration_s, int start_bins,
                               int length_bins);

struct GroupSample {
  std::vector<int> actions;
  std::vector<MomentPrediction> predictions;
};

GroupSample sample_group(const ToyPolicy& policy, const QueryRecord& sample,
                         int group_size, std::mt19937_64& rng);

// Score-function ascent: the bank that produced the group gets
// logits[action] += lr * advantage per draw; everything else is untouched.
ToyPolicy update_step(const ToyPolicy& policy, bool relevant_bank,
                      const GroupSample& group,
                      const std::vector<double>& advantages, double lr);

struct SimConfig {
  // Defaults are calibrated so a run converges to the best grid cell instead
  // of freezing on a partial-overlap neighbor: a small step with a softened
  // sampling distribution keeps every action explored long enough.
  int group_size = 32;
  long long iterations = 40000;
  double learning_rate = 0.01;
  double irrelevant_ratio = 0.1;  // share of training draws from irrelevant pairs
  RewardWeights weights;
  int start_bins = 20;
  int length_bins = 10;
  double temperature = 2.0;
  std::uint64_t seed = 7;
};

void validate(const SimConfig& config);

// Overrides `base` with key=value lines ('#' comments and blanks skipped).
SimConfig parse_sim_config(std::istream& in, const std::string& source,
                           SimConfig base = {});
SimConfig load_sim_config(const std::string& path, SimConfig base = {});

struct TrajectoryPoint {
  long long iteration = 0;
  double refusal_rate_irrelevant = 0.0;
  double mean_iou_relevant = 0.0;
  double mean_reward = 0.0;
};

struct SimResult {
  std::vector<TrajectoryPoint> trajectory;
  EvalReport final_report;
  ToyPolicy final_policy;
};

// One sample per iteration (irrelevant with probability irrelevant_ratio),
// group rollout, group-relative advantages, policy update. Trajectory metrics
// are exact softmax expectations, not rollout noise; the final report scores
// the argmax decode of every record.
SimResult run_experiment(const SimConfig& config,
                         const std::vector<QueryRecord>& dataset);

void write_trajectory_csv(std::ostream& out,
                          const std::vector<TrajectoryPoint>& trajectory);

}  // namespace tvg
