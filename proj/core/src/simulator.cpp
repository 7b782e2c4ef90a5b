#include "tvg/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "tvg/errors.hpp"
#include "tvg/strfmt.hpp"

namespace tvg {

ToyPolicy make_policy(int start_bins, int length_bins, double temperature) {
  if (start_bins < 1 || length_bins < 1)
    throw Error("policy grid needs at least 1 bin per axis");
  if (!(temperature > 0.0)) throw Error("temperature must be positive");
  ToyPolicy p;
  p.start_bins = start_bins;
  p.length_bins = length_bins;
  p.temperature = temperature;
  p.relevant_logits.assign(static_cast<std::size_t>(p.action_count()), 0.0);
  p.irrelevant_logits.assign(static_cast<std::size_t>(p.action_count()), 0.0);
  return p;
}

std::vector<double> softmax(const std::vector<double>& logits, double temperature) {
  if (logits.empty()) throw Error("softmax over an empty logit vector");
  if (!(temperature > 0.0)) throw Error("temperature must be positive");
  double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> probs(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp((logits[i] - mx) / temperature);
    sum += probs[i];
  }
  for (double& p : probs) p /= sum;
  return probs;
}

MomentPrediction decode_action(int action, double duration_s, int start_bins,
                               int length_bins) {
  MomentPrediction pred;
  if (action == 0) {
    pred.refused = true;
    pred.raw_text = "[]";
    return pred;
  }
  int cell = action - 1;
  if (cell < 0 || cell >= start_bins * length_bins)
    throw Error("action " + std::to_string(action) + " is outside the grid");
  int s = cell / length_bins;
  int l = cell % length_bins;
  double start = s * duration_s / start_bins;
  double end = std::min(duration_s, start + l * duration_s / length_bins);
  pred.intervals.push_back({start, end});
  return pred;
}

GroupSample sample_group(const ToyPolicy& policy, const QueryRecord& sample,
                         int group_size, std::mt19937_64& rng) {
  if (group_size < 1) throw Error("group size must be at least 1");
  auto probs = softmax(policy.bank(sample.relevant()), policy.temperature);

  GroupSample group;
  group.actions.reserve(static_cast<std::size_t>(group_size));
  group.predictions.reserve(static_cast<std::size_t>(group_size));
  for (int g = 0; g < group_size; ++g) {
    double u = uniform_unit(rng);
    double acc = 0.0;
    int action = static_cast<int>(probs.size()) - 1;
    for (std::size_t a = 0; a < probs.size(); ++a) {
      acc += probs[a];
      if (u < acc) {
        action = static_cast<int>(a);
        break;
      }
    }
    group.actions.push_back(action);
    group.predictions.push_back(decode_action(action, sample.duration_s,
                                              policy.start_bins,
                                              policy.length_bins));
  }
  return group;
}

ToyPolicy update_step(const ToyPolicy& policy, bool relevant_bank,
                      const GroupSample& group,
                      const std::vector<double>& advantages, double lr) {
  if (group.actions.size() != advantages.size())
    throw Error("group has " + std::to_string(group.actions.size()) +
                " actions but " + std::to_string(advantages.size()) +
                " advantages");
  if (!(lr > 0.0)) throw Error("learning rate must be positive");

  ToyPolicy next = policy;
  auto& bank = relevant_bank ? next.relevant_logits : next.irrelevant_logits;
  for (std::size_t i = 0; i < group.actions.size(); ++i) {
    int a = group.actions[i];
    if (a < 0 || a >= policy.action_count())
      throw Error("action " + std::to_string(a) + " is outside the policy");
    bank[static_cast<std::size_t>(a)] += lr * advantages[i];
  }
  return next;
}

void validate(const SimConfig& config) {
  if (config.group_size < 2) throw Error("group_size must be at least 2");
  if (config.iterations < 0) throw Error("iterations must be nonnegative");
  if (!(config.learning_rate > 0.0)) throw Error("learning_rate must be positive");
  if (!(config.irrelevant_ratio >= 0.0) || config.irrelevant_ratio >= 1.0)
    throw Error("irrelevant_ratio must lie in [0, 1)");
  if (config.start_bins < 1 || config.length_bins < 1)
    throw Error("grid needs at least 1 bin per axis");
  if (!(config.temperature > 0.0)) throw Error("temperature must be positive");
  if (!(config.weights.alpha >= 0.0) || !(config.weights.beta >= 0.0) ||
      !(config.weights.gamma >= 0.0))
    throw Error("reward weights must be nonnegative");
}

SimConfig parse_sim_config(std::istream& in, const std::string& source,
                           SimConfig base) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = line;
    auto first = trimmed.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    trimmed = trimmed.substr(first);
    if (trimmed[0] == '#') continue;

    auto eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw Error(source + " line " + std::to_string(lineno) +
                  ": expected key=value");
    std::string key = trimmed.substr(0, eq);
    std::string value = trimmed.substr(eq + 1);
    auto strip = [](std::string s) {
      auto b = s.find_first_not_of(" \t");
      auto e = s.find_last_not_of(" \t");
      if (b == std::string::npos) return std::string();
      return s.substr(b, e - b + 1);
    };
    key = strip(key);
    value = strip(value);

    try {
      if (key == "group_size") base.group_size = static_cast<int>(parse_int(value));
      else if (key == "iterations") base.iterations = parse_int(value);
      else if (key == "learning_rate") base.learning_rate = parse_double(value);
      else if (key == "irrelevant_ratio") base.irrelevant_ratio = parse_double(value);
      else if (key == "alpha") base.weights.alpha = parse_double(value);
      else if (key == "beta") base.weights.beta = parse_double(value);
      else if (key == "gamma") base.weights.gamma = parse_double(value);
      else if (key == "start_bins") base.start_bins = static_cast<int>(parse_int(value));
      else if (key == "length_bins") base.length_bins = static_cast<int>(parse_int(value));
      else if (key == "temperature") base.temperature = parse_double(value);
      else if (key == "seed") base.seed = static_cast<std::uint64_t>(parse_int(value));
      else throw Error("unknown key '" + key + "'");
    } catch (const Error& e) {
      throw Error(source + " line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return base;
}

SimConfig load_sim_config(const std::string& path, SimConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config '" + path + "'");
  return parse_sim_config(in, path, base);
}

namespace {

// Best IoU of a decoded action against a record's windows; refusal scores 0.
double action_iou(const MomentPrediction& pred, const QueryRecord& rec) {
  if (pred.refused || pred.intervals.empty()) return 0.0;
  double best = 0.0;
  for (const Interval& w : rec.windows)
    best = std::max(best, iou(pred.intervals.front(), w));
  return best;
}

}  // namespace

SimResult run_experiment(const SimConfig& config,
                         const std::vector<QueryRecord>& dataset) {
  validate(config);
  if (dataset.empty()) throw Error("simulation dataset is empty");

  std::vector<std::size_t> relevant_pool, irrelevant_pool;
  for (std::size_t i = 0; i < dataset.size(); ++i)
    (dataset[i].relevant() ? relevant_pool : irrelevant_pool).push_back(i);
  if (relevant_pool.empty())
    throw Error("simulation dataset needs at least one relevant record");
  if (config.irrelevant_ratio > 0.0 && irrelevant_pool.empty())
    throw Error("irrelevant_ratio > 0 needs irrelevant records in the dataset");

  ToyPolicy policy =
      make_policy(config.start_bins, config.length_bins, config.temperature);
  const int actions = policy.action_count();

  // Per-record tables over the action space; trajectory metrics are exact
  // expectations under the current softmax.
  std::vector<std::vector<double>> iou_table(dataset.size());
  std::vector<std::vector<double>> reward_table(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const QueryRecord& rec = dataset[i];
    GroundTruthEntry gt{rec.windows, rec.relevant()};
    iou_table[i].resize(static_cast<std::size_t>(actions));
    reward_table[i].resize(static_cast<std::size_t>(actions));
    for (int a = 0; a < actions; ++a) {
      auto pred = decode_action(a, rec.duration_s, config.start_bins,
                                config.length_bins);
      iou_table[i][static_cast<std::size_t>(a)] = action_iou(pred, rec);
      reward_table[i][static_cast<std::size_t>(a)] =
          total_reward(pred, gt, config.weights).r_total;
    }
  }

  auto expected = [&](const std::vector<double>& probs,
                      const std::vector<std::size_t>& pool,
                      const std::vector<std::vector<double>>& table) {
    if (pool.empty()) return 0.0;
    double acc = 0.0;
    for (std::size_t i : pool)
      acc += std::inner_product(probs.begin(), probs.end(), table[i].begin(), 0.0);
    return acc / static_cast<double>(pool.size());
  };

  std::mt19937_64 rng(config.seed);
  SimResult result;
  result.trajectory.reserve(static_cast<std::size_t>(config.iterations));

  for (long long it = 1; it <= config.iterations; ++it) {
    bool pick_irrelevant =
        config.irrelevant_ratio > 0.0 && uniform_unit(rng) < config.irrelevant_ratio;
    const auto& pool = pick_irrelevant ? irrelevant_pool : relevant_pool;
    std::size_t rec_i = pool[uniform_below(rng, pool.size())];
    const QueryRecord& rec = dataset[rec_i];

    GroupSample group = sample_group(policy, rec, config.group_size, rng);
    std::vector<double> rewards(group.actions.size());
    for (std::size_t g = 0; g < group.actions.size(); ++g)
      rewards[g] =
          reward_table[rec_i][static_cast<std::size_t>(group.actions[g])];
    auto adv = group_advantages(rewards);
    policy = update_step(policy, rec.relevant(), group, adv.advantages,
                         config.learning_rate);

    auto p_rel = softmax(policy.relevant_logits, policy.temperature);
    auto p_irr = softmax(policy.irrelevant_logits, policy.temperature);
    TrajectoryPoint pt;
    pt.iteration = it;
    pt.refusal_rate_irrelevant = p_irr[0];
    pt.mean_iou_relevant = expected(p_rel, relevant_pool, iou_table);
    double reward_rel = expected(p_rel, relevant_pool, reward_table);
    double reward_irr = expected(p_irr, irrelevant_pool, reward_table);
    pt.mean_reward = (1.0 - config.irrelevant_ratio) * reward_rel +
                     config.irrelevant_ratio * reward_irr;
    result.trajectory.push_back(pt);
  }

  // Final scoring decodes the argmax action for every record.
  std::vector<MomentPrediction> preds;
  std::vector<GroundTruthEntry> gts;
  preds.reserve(dataset.size());
  gts.reserve(dataset.size());
  auto argmax = [](const std::vector<double>& v) {
    return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
  };
  int best_rel = argmax(policy.relevant_logits);
  int best_irr = argmax(policy.irrelevant_logits);
  for (const QueryRecord& rec : dataset) {
    int a = rec.relevant() ? best_rel : best_irr;
    preds.push_back(decode_action(a, rec.duration_s, config.start_bins,
                                  config.length_bins));
    gts.push_back({rec.windows, rec.relevant()});
  }
  result.final_report = evaluate(preds, gts);
  result.final_policy = std::move(policy);
  return result;
}

void write_trajectory_csv(std::ostream& out,
                          const std::vector<TrajectoryPoint>& trajectory) {
  out << "iteration,refusal_rate_irrelevant,mean_iou_relevant,mean_reward\n";
  for (const TrajectoryPoint& pt : trajectory) {
    out << pt.iteration << ',' << format_double(pt.refusal_rate_irrelevant)
        << ',' << format_double(pt.mean_iou_relevant) << ','
        << format_double(pt.mean_reward) << "\n";
  }
}

}  // namespace tvg
