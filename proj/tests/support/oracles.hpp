#pragma once

// Reference implementations used to cross-check the library. Everything here
// is written from the problem definition, on purpose via different algorithms
// than the library uses, so agreement is evidence rather than tautology.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include <tvg/allocation.hpp>
#include <tvg/interval.hpp>
#include <tvg/reward.hpp>

namespace oracle {

// Optimal 1-D transport by explicit plan construction: walk a supply pointer
// and a demand pointer, always shipping the bottleneck amount. For a convex
// cost on a line this greedy plan is optimal. Unnormalized bin-unit cost.
inline double transport_cost_raw(std::vector<double> supply,
                                 std::vector<double> demand) {
  double cost = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < supply.size() && j < demand.size()) {
    const double moved = std::min(supply[i], demand[j]);
    cost += moved * std::abs(static_cast<double>(i) - static_cast<double>(j));
    supply[i] -= moved;
    demand[j] -= moved;
    if (supply[i] <= demand[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return cost;
}

inline double transport_cost(const std::vector<double>& a,
                             const std::vector<double>& b) {
  return transport_cost_raw(a, b) / static_cast<double>(a.size() - 1);
}

// Circular variant: cut the ring at every position, solve the line problem on
// the rotation, keep the cheapest. Some optimal circular plan leaves one edge
// empty, so the best cut attains the true ring cost.
inline double circular_transport_cost(const std::vector<double>& a,
                                      const std::vector<double>& b) {
  const std::size_t n = a.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t cut = 0; cut < n; ++cut) {
    std::vector<double> ra(n);
    std::vector<double> rb(n);
    for (std::size_t k = 0; k < n; ++k) {
      ra[k] = a[(k + cut) % n];
      rb[k] = b[(k + cut) % n];
    }
    best = std::min(best, transport_cost_raw(ra, rb));
  }
  return best / static_cast<double>(n - 1);
}

// Exhaustive one-to-one assignment maximizing the IoU sum. Fine up to ~6x6.
inline double best_assignment_iou_sum(const std::vector<tvg::Interval>& preds,
                                      const std::vector<tvg::Interval>& gts) {
  std::vector<bool> used(gts.size(), false);
  double best = 0.0;
  std::function<void(std::size_t, double)> walk = [&](std::size_t k, double acc) {
    if (k == preds.size()) {
      best = std::max(best, acc);
      return;
    }
    walk(k + 1, acc);
    for (std::size_t j = 0; j < gts.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      walk(k + 1, acc + tvg::iou(preds[k], gts[j]));
      used[j] = false;
    }
  };
  walk(0, 0.0);
  return best;
}

inline double best_r_tvg(const std::vector<tvg::Interval>& preds,
                         const std::vector<tvg::Interval>& gts) {
  if (preds.empty() || gts.empty()) return 0.0;
  const double denom = static_cast<double>(std::max(preds.size(), gts.size()));
  return best_assignment_iou_sum(preds, gts) / denom;
}

// Average precision maximized over every injective rank-to-window matching
// whose matched pairs clear tau. Predictions are already in rank order.
inline double best_ap(const std::vector<tvg::Interval>& preds,
                      const std::vector<tvg::Interval>& gts, double tau) {
  if (gts.empty()) return 0.0;
  std::vector<int> pick(preds.size(), -1);
  std::vector<bool> used(gts.size(), false);
  double best = 0.0;
  std::function<void(std::size_t)> walk = [&](std::size_t k) {
    if (k == preds.size()) {
      int tp = 0;
      double sum = 0.0;
      for (std::size_t r = 0; r < preds.size(); ++r) {
        if (pick[r] < 0) continue;
        ++tp;
        sum += static_cast<double>(tp) / static_cast<double>(r + 1);
      }
      best = std::max(best, sum / static_cast<double>(gts.size()));
      return;
    }
    pick[k] = -1;
    walk(k + 1);
    for (std::size_t j = 0; j < gts.size(); ++j) {
      if (used[j] || tvg::iou(preds[k], gts[j]) < tau) continue;
      used[j] = true;
      pick[k] = static_cast<int>(j);
      walk(k + 1);
      pick[k] = -1;
      used[j] = false;
    }
  };
  walk(0);
  return best;
}

inline double recall_percent(const std::vector<tvg::MomentPrediction>& preds,
                             const std::vector<tvg::GroundTruthEntry>& gts,
                             double tau) {
  long long relevant = 0;
  long long hits = 0;
  for (std::size_t q = 0; q < gts.size(); ++q) {
    if (gts[q].windows.empty()) continue;
    ++relevant;
    if (preds[q].refused || preds[q].intervals.empty()) continue;
    for (const auto& w : gts[q].windows) {
      if (tvg::iou(preds[q].intervals.front(), w) >= tau) {
        ++hits;
        break;
      }
    }
  }
  if (relevant == 0) return 0.0;
  return 100.0 * static_cast<double>(hits) / static_cast<double>(relevant);
}

inline double mean_ap_percent(const std::vector<tvg::MomentPrediction>& preds,
                              const std::vector<tvg::GroundTruthEntry>& gts) {
  double threshold_sum = 0.0;
  int thresholds = 0;
  for (int t = 50; t <= 95; t += 5) {
    const double tau = static_cast<double>(t) / 100.0;
    double query_sum = 0.0;
    long long relevant = 0;
    for (std::size_t q = 0; q < gts.size(); ++q) {
      if (gts[q].windows.empty()) continue;
      ++relevant;
      if (preds[q].refused) continue;
      query_sum += best_ap(preds[q].intervals, gts[q].windows, tau);
    }
    if (relevant == 0) return 0.0;
    threshold_sum += query_sum / static_cast<double>(relevant);
    ++thresholds;
  }
  return 100.0 * threshold_sum / static_cast<double>(thresholds);
}

inline long long token_count_ref(int w, int h, int patch, int merge) {
  const long long cols = (w + patch - 1) / patch;
  const long long rows = (h + patch - 1) / patch;
  const long long cell = static_cast<long long>(merge) * merge;
  return (cols * rows + cell - 1) / cell;
}

inline std::pair<int, int> scaled_dims_ref(int w, int h, double scale, int patch) {
  auto snap = [patch](int shrunk) { return std::max(patch, (shrunk / patch) * patch); };
  const int w2 = static_cast<int>(std::floor(static_cast<double>(w) / scale));
  const int h2 = static_cast<int>(std::floor(static_cast<double>(h) / scale));
  return {snap(w2), snap(h2)};
}

struct PlanRef {
  bool feasible = true;
  long long min_budget = 0;
  long long total = 0;
  std::vector<bool> is_key;
  std::vector<long long> tokens;
};

// Rebuilds the whole allocation from raw pair scores: min-max normalize,
// threshold the larger adjacent score, then demote the least salient keys
// one at a time (ties to the lower index) until the budget holds.
inline PlanRef plan_ref(const std::vector<double>& raw_scores,
                        const std::vector<std::pair<int, int>>& dims,
                        long long budget, const tvg::AllocationParams& p,
                        const tvg::TokenizerGeometry& g) {
  const std::size_t frames = dims.size();
  std::vector<double> norm(raw_scores.size(), 0.0);
  const auto [lo_it, hi_it] = std::minmax_element(raw_scores.begin(), raw_scores.end());
  if (*hi_it > *lo_it) {
    for (std::size_t i = 0; i < raw_scores.size(); ++i) {
      norm[i] = (raw_scores[i] - *lo_it) / (*hi_it - *lo_it);
    }
  }

  PlanRef ref;
  ref.is_key.resize(frames);
  ref.tokens.resize(frames);
  std::vector<double> salience(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double s;
    if (i == 0) {
      s = norm.front();
    } else if (i + 1 == frames) {
      s = norm.back();
    } else {
      s = std::max(norm[i - 1], norm[i]);
    }
    salience[i] = s;
    ref.is_key[i] = s >= p.t_key;
  }

  auto tokens_at = [&](std::size_t i, double scale) {
    const auto [w, h] = scaled_dims_ref(dims[i].first, dims[i].second, scale, g.patch);
    return token_count_ref(w, h, g.patch, g.merge);
  };

  ref.min_budget = 0;
  ref.total = 0;
  for (std::size_t i = 0; i < frames; ++i) {
    ref.min_budget += tokens_at(i, p.r_l);
    ref.tokens[i] = tokens_at(i, ref.is_key[i] ? p.r_s : p.r_l);
    ref.total += ref.tokens[i];
  }
  if (budget < ref.min_budget) {
    ref.feasible = false;
    return ref;
  }

  while (ref.total > budget) {
    std::size_t victim = frames;
    for (std::size_t i = 0; i < frames; ++i) {
      if (!ref.is_key[i]) continue;
      if (victim == frames || salience[i] < salience[victim]) victim = i;
    }
    ref.is_key[victim] = false;
    ref.total -= ref.tokens[victim];
    ref.tokens[victim] = tokens_at(victim, p.r_l);
    ref.total += ref.tokens[victim];
  }
  return ref;
}

// Exhaustive block matching, kept deliberately plain: every displacement in
// the window, first-found wins among equal (SAD, magnitude) candidates.
inline double blockflow_ref(const std::vector<double>& ga,
                            const std::vector<double>& gb, int w, int h,
                            int block, int radius) {
  double total = 0.0;
  long long blocks = 0;
  for (int by = 0; by < h; by += block) {
    for (int bx = 0; bx < w; bx += block) {
      double best_sad = std::numeric_limits<double>::infinity();
      double best_mag = std::numeric_limits<double>::infinity();
      for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
          if (bx + dx < 0 || by + dy < 0 || bx + dx + block > w ||
              by + dy + block > h) {
            continue;
          }
          double sad = 0.0;
          for (int y = 0; y < block; ++y) {
            for (int x = 0; x < block; ++x) {
              const double va = ga[static_cast<std::size_t>(by + y) * w + bx + x];
              const double vb = gb[static_cast<std::size_t>(by + dy + y) * w + bx + dx + x];
              sad += std::abs(va - vb);
            }
          }
          const double mag = std::sqrt(static_cast<double>(dx) * dx +
                                       static_cast<double>(dy) * dy);
          if (sad < best_sad || (sad == best_sad && mag < best_mag)) {
            best_sad = sad;
            best_mag = mag;
          }
        }
      }
      total += best_mag;
      ++blocks;
    }
  }
  return total / static_cast<double>(blocks) /
         (static_cast<double>(radius) * std::sqrt(2.0));
}

}  // namespace oracle
