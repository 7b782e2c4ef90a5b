#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "tvg/reward.hpp"

namespace tvg {

struct EvalReport {
  double r_at_50 = 0.0;
  double r_at_70 = 0.0;
  double map = 0.0;
  std::optional<double> refusal_recall;  // absent when nothing is irrelevant
  long long n_relevant = 0;
  long long n_irrelevant = 0;
};

// Percent of relevant queries whose first predicted interval reaches IoU >=
// tau against any window. Refusals miss. Returns 0 when nothing is relevant.
double recall_at(const std::vector<MomentPrediction>& preds,
                 const std::vector<GroundTruthEntry>& gts, double tau);

// Mean average precision over IoU thresholds 0.50:0.05:0.95. Prediction order
// is rank; a prediction is a true positive when it reaches the threshold
// against a still-unmatched window (highest IoU first, ties to the earlier
// window start).
double mean_ap(const std::vector<MomentPrediction>& preds,
               const std::vector<GroundTruthEntry>& gts);

// Percent of irrelevant queries answered with a refusal. Requires at least
// one irrelevant query.
double refusal_recall(const std::vector<MomentPrediction>& preds,
                      const std::vector<GroundTruthEntry>& gts);

EvalReport evaluate(const std::vector<MomentPrediction>& preds,
                    const std::vector<GroundTruthEntry>& gts);

// One key=value per line; the refusal_recall line is dropped when absent.
void write_report_kv(std::ostream& out, const EvalReport& report);

// Header row plus one data row; an absent refusal_recall leaves its field
// empty.
void write_report_csv(std::ostream& out, const EvalReport& report);

}  // namespace tvg
