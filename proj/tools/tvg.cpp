#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "tvg/allocation.hpp"
#include "tvg/dataset.hpp"
#include "tvg/errors.hpp"
#include "tvg/frame_io.hpp"
#include "tvg/metrics.hpp"
#include "tvg/reward.hpp"
#include "tvg/salience.hpp"
#include "tvg/simulator.hpp"
#include "tvg/strfmt.hpp"
#include "tvg/timestamps.hpp"

namespace {

using nlohmann::json;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw tvg::Error("cannot open '" + path + "' for writing");
  return out;
}

void finish_out(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw tvg::Error("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw tvg::Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (!text.empty() && text.back() == '\n') text.pop_back();
  return text;
}

std::vector<tvg::FrameSample> load_frames(const std::string& dir) {
  tvg::FrameDirMeta meta = tvg::read_frame_dir_meta(dir);
  return tvg::load_frame_dir(dir, meta.fps, meta.duration_s);
}

constexpr const char* kSalienceHeader = "index,raw_score,normalized_score,method";

void write_salience_csv(std::ostream& out, const tvg::SalienceSeries& raw,
                        const tvg::SalienceSeries& norm) {
  out << kSalienceHeader << "\n";
  for (std::size_t i = 0; i < raw.scores.size(); ++i) {
    out << i << ',' << tvg::format_double(raw.scores[i]) << ','
        << tvg::format_double(norm.scores[i]) << ','
        << tvg::to_string(raw.method) << "\n";
  }
}

tvg::SalienceSeries read_salience_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw tvg::Error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw tvg::Error("'" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSalienceHeader)
    throw tvg::Error(path + ": header mismatch, expected '" +
                     std::string(kSalienceHeader) + "'");

  tvg::SalienceSeries series;
  series.normalized = false;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (fields.size() != 4)
      throw tvg::Error(path + " line " + std::to_string(lineno) +
                       ": expected 4 fields");
    try {
      long long idx = tvg::parse_int(fields[0]);
      if (idx != static_cast<long long>(series.scores.size()))
        throw tvg::Error("indexes must be sequential from 0");
      series.scores.push_back(tvg::parse_double(fields[1]));
      series.method = tvg::salience_method_from_string(fields[3]);
    } catch (const tvg::Error& e) {
      throw tvg::Error(path + " line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return series;
}

struct ResponseRow {
  std::string qid;
  std::string response;
  std::optional<std::string> group;
};

std::vector<ResponseRow> read_responses(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw tvg::Error("cannot open '" + path + "'");
  std::vector<ResponseRow> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw tvg::Error(path + " line " + std::to_string(lineno) +
                       ": invalid JSON: " + e.what());
    }
    ResponseRow row;
    try {
      row.qid = obj.at("qid").get<std::string>();
      row.response = obj.at("response").get<std::string>();
      if (obj.contains("group")) row.group = obj["group"].get<std::string>();
    } catch (const json::exception& e) {
      throw tvg::Error(path + " line " + std::to_string(lineno) + ": " + e.what());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::unordered_map<std::string, std::size_t> index_by_qid(
    const std::vector<tvg::QueryRecord>& records) {
  std::unordered_map<std::string, std::size_t> map;
  for (std::size_t i = 0; i < records.size(); ++i) map[records[i].qid] = i;
  return map;
}

void run_salience(const std::string& frames_dir, const std::string& method,
                  const std::string& out_path, const tvg::SalienceParams& params) {
  auto frames = load_frames(frames_dir);
  auto series =
      tvg::score_series(frames, tvg::salience_method_from_string(method), params);
  auto norm = tvg::normalize_series(series);
  auto out = open_out(out_path);
  write_salience_csv(out, series, norm);
  finish_out(out, out_path);
}

void run_allocate(const std::string& frames_dir, const std::string& scores_path,
                  long long budget, const std::string& out_path,
                  const tvg::AllocationParams& params,
                  const tvg::TokenizerGeometry& geom) {
  auto frames = load_frames(frames_dir);
  auto series = read_salience_csv(scores_path);
  auto plan = tvg::build_plan(series, frames, budget, params, geom);
  tvg::save_plan(out_path, plan);
}

void run_prompt(const std::string& plan_path, const std::string& frames_dir,
                const std::string& query, const std::string& instruction_path,
                const std::string& out_path, int frac_width, bool index_codec) {
  if (query.empty()) throw tvg::Error("query must be nonempty");
  auto plan = tvg::load_plan(plan_path);
  auto meta = tvg::read_frame_dir_meta(frames_dir);
  if (!(meta.fps > 0.0)) throw tvg::Error("frame metadata has nonpositive fps");
  long long frame_count = std::llround(meta.duration_s * meta.fps);

  std::string instruction = read_text_file(instruction_path);
  if (instruction.empty())
    throw tvg::Error("instruction file '" + instruction_path + "' is empty");

  std::vector<tvg::AlignedTimestamp> aligned;
  if (index_codec) {
    std::vector<int> indices;
    for (const auto& f : plan.per_frame) indices.push_back(f.frame_index);
    aligned = tvg::align_indices(indices);
  } else {
    std::vector<double> seconds;
    for (const auto& f : plan.per_frame) {
      if (f.frame_index < 0 || f.frame_index >= frame_count)
        throw tvg::Error("plan references frame " + std::to_string(f.frame_index) +
                         " outside the " + std::to_string(frame_count) +
                         "-frame directory");
      seconds.push_back(f.frame_index / meta.fps);
    }
    aligned = tvg::align_timestamps(seconds, frac_width);
  }

  auto seq = tvg::build_prompt(plan, aligned, instruction, query);
  auto out = open_out(out_path);
  out << tvg::render_prompt_text(seq);
  finish_out(out, out_path);
}

void run_reward(const std::string& responses_path, const std::string& manifest_path,
                const std::string& out_path, const tvg::RewardWeights& weights) {
  auto records = tvg::load_manifest(manifest_path);
  auto by_qid = index_by_qid(records);
  auto rows = read_responses(responses_path);

  struct Scored {
    tvg::RewardBreakdown breakdown;
    std::optional<double> advantage;
  };
  std::vector<Scored> scored(rows.size());
  std::map<std::string, std::vector<std::size_t>> groups;

  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto it = by_qid.find(rows[i].qid);
    if (it == by_qid.end())
      throw tvg::Error("response qid '" + rows[i].qid + "' is not in the manifest");
    const tvg::QueryRecord& rec = records[it->second];
    tvg::GroundTruthEntry gt{rec.windows, rec.relevant()};
    scored[i].breakdown = tvg::total_reward(tvg::parse_response(rows[i].response),
                                            gt, weights);
    if (rows[i].group) groups[*rows[i].group].push_back(i);
  }

  for (const auto& [name, members] : groups) {
    if (members.size() < 2)
      throw tvg::Error("group '" + name + "' has fewer than 2 responses");
    std::vector<double> rewards;
    rewards.reserve(members.size());
    for (std::size_t i : members) rewards.push_back(scored[i].breakdown.r_total);
    auto adv = tvg::group_advantages(rewards);
    for (std::size_t k = 0; k < members.size(); ++k)
      scored[members[k]].advantage = adv.advantages[k];
  }

  auto out = open_out(out_path);
  out << "qid,r_format,r_tvg,r_pir,r_total,advantage\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& b = scored[i].breakdown;
    out << rows[i].qid << ',' << tvg::format_double(b.r_format) << ','
        << tvg::format_double(b.r_tvg) << ',' << tvg::format_double(b.r_pir)
        << ',' << tvg::format_double(b.r_total) << ',';
    if (scored[i].advantage) out << tvg::format_double(*scored[i].advantage);
    out << "\n";
  }
  finish_out(out, out_path);
}

void run_eval(const std::string& predictions_path, const std::string& manifest_path,
              const std::string& overlay_path, const std::string& out_path,
              const std::string& csv_path) {
  auto records = tvg::load_manifest(manifest_path);
  if (!overlay_path.empty())
    records = tvg::apply_overlay(records, tvg::load_overlay(overlay_path));

  auto rows = read_responses(predictions_path);
  std::unordered_map<std::string, std::size_t> row_by_qid;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!row_by_qid.emplace(rows[i].qid, i).second)
      throw tvg::Error("duplicate prediction for qid '" + rows[i].qid + "'");
  }
  auto by_qid = index_by_qid(records);
  for (const auto& row : rows)
    if (by_qid.find(row.qid) == by_qid.end())
      throw tvg::Error("prediction qid '" + row.qid + "' is not in the manifest");

  std::vector<tvg::MomentPrediction> preds;
  std::vector<tvg::GroundTruthEntry> gts;
  preds.reserve(records.size());
  gts.reserve(records.size());
  for (const auto& rec : records) {
    auto it = row_by_qid.find(rec.qid);
    if (it == row_by_qid.end())
      throw tvg::Error("manifest qid '" + rec.qid + "' has no prediction");
    preds.push_back(tvg::parse_response(rows[it->second].response));
    gts.push_back({rec.windows, rec.relevant()});
  }

  auto report = tvg::evaluate(preds, gts);
  auto out = open_out(out_path);
  tvg::write_report_kv(out, report);
  finish_out(out, out_path);
  if (!csv_path.empty()) {
    auto csv = open_out(csv_path);
    tvg::write_report_csv(csv, report);
    finish_out(csv, csv_path);
  }
}

void run_augment(const std::string& manifest_path, double ratio, std::uint64_t seed,
                 const std::string& out_path) {
  auto records = tvg::load_manifest(manifest_path);
  auto augmented = tvg::augment_irrelevant(records, ratio, seed);
  tvg::save_manifest(out_path, augmented);
}

void run_simulate(const tvg::SimConfig& config, const std::string& manifest_path,
                  const std::string& out_path, const std::string& report_path) {
  auto records = tvg::load_manifest(manifest_path);
  auto result = tvg::run_experiment(config, records);
  auto out = open_out(out_path);
  tvg::write_trajectory_csv(out, result.trajectory);
  finish_out(out, out_path);
  if (!report_path.empty()) {
    auto rep = open_out(report_path);
    tvg::write_report_kv(rep, result.final_report);
    finish_out(rep, report_path);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal video grounding toolchain: frame salience, token "
               "budgeting, aligned prompts, verifiable rewards, retrieval "
               "metrics, and a toy policy-optimization experiment"};
  app.require_subcommand(1);

  // salience
  std::string s_frames, s_method = "OT", s_out;
  tvg::SalienceParams s_params;
  auto* sal = app.add_subcommand("salience",
                                 "Score adjacent-frame change for a frame directory");
  sal->add_option("--frames", s_frames, "Frame directory with frames.json sidecar")
      ->required();
  sal->add_option("--method", s_method, "Scoring method")
      ->check(CLI::IsMember({"OT", "PHASH", "BLOCKFLOW"}))
      ->capture_default_str();
  sal->add_option("--out", s_out, "Output CSV path")->required();
  sal->add_option("--bins", s_params.bins, "Hue histogram bins (OT)")
      ->capture_default_str();
  sal->add_flag("--circular", s_params.circular,
                "Treat hue histograms as circular (OT)");
  sal->add_option("--analysis-size", s_params.analysis_size,
                  "Downscale edge before hue analysis, 0 disables (OT)")
      ->capture_default_str();
  sal->add_option("--block", s_params.block, "Block edge in pixels (BLOCKFLOW)")
      ->capture_default_str();
  sal->add_option("--radius", s_params.radius, "Search radius in pixels (BLOCKFLOW)")
      ->capture_default_str();
  sal->callback([&] { run_salience(s_frames, s_method, s_out, s_params); });

  // allocate
  std::string a_frames, a_scores, a_out;
  long long a_budget = 0;
  tvg::AllocationParams a_params;
  tvg::TokenizerGeometry a_geom;
  auto* alloc = app.add_subcommand(
      "allocate", "Assign per-frame scales and token counts under a budget");
  alloc->add_option("--frames", a_frames, "Frame directory with frames.json sidecar")
      ->required();
  alloc->add_option("--scores", a_scores, "Salience CSV from the salience step")
      ->required();
  alloc->add_option("--budget", a_budget, "Total visual token budget")->required();
  alloc->add_option("--out", a_out, "Output plan CSV path")->required();
  alloc->add_option("--t-key", a_params.t_key, "Key-frame threshold on normalized scores")
      ->capture_default_str();
  alloc->add_option("--r-l", a_params.r_l, "Downsampling scale for non-key frames")
      ->capture_default_str();
  alloc->add_option("--r-s", a_params.r_s, "Downsampling scale for key frames")
      ->capture_default_str();
  alloc->add_flag("--promote", a_params.promote,
                  "Spend leftover budget upgrading non-key frames");
  alloc->add_option("--patch", a_geom.patch, "Patch edge in pixels")
      ->capture_default_str();
  alloc->add_option("--merge", a_geom.merge, "Patch merge factor per axis")
      ->capture_default_str();
  alloc->callback(
      [&] { run_allocate(a_frames, a_scores, a_budget, a_out, a_params, a_geom); });

  // prompt
  std::string p_plan, p_frames, p_query, p_instruction, p_out;
  int p_frac_width = 1;
  bool p_index_codec = false;
  auto* prompt = app.add_subcommand(
      "prompt", "Render the interleaved timestamp/frame prompt for a plan");
  prompt->add_option("--plan", p_plan, "Plan CSV from the allocate step")->required();
  prompt->add_option("--frames", p_frames, "Frame directory with frames.json sidecar")
      ->required();
  prompt->add_option("--query", p_query, "Query text")->required();
  prompt->add_option("--instruction", p_instruction, "Instruction text file")
      ->required();
  prompt->add_option("--out", p_out, "Output text path")->required();
  prompt->add_option("--frac-width", p_frac_width,
                     "Fraction digits kept in aligned timestamps")
      ->capture_default_str();
  prompt->add_flag("--index-codec", p_index_codec,
                   "Render zero-padded frame indexes instead of seconds");
  prompt->callback([&] {
    run_prompt(p_plan, p_frames, p_query, p_instruction, p_out, p_frac_width,
               p_index_codec);
  });

  // reward
  std::string r_responses, r_manifest, r_out;
  tvg::RewardWeights r_weights;
  auto* reward = app.add_subcommand(
      "reward", "Score model responses against a manifest");
  reward->add_option("--responses", r_responses,
                     "JSONL rows {qid, response, group?}")
      ->required();
  reward->add_option("--manifest", r_manifest, "Manifest JSONL")->required();
  reward->add_option("--out", r_out, "Output CSV path")->required();
  reward->add_option("--alpha", r_weights.alpha, "Format reward weight")
      ->capture_default_str();
  reward->add_option("--beta", r_weights.beta, "Precision reward weight")
      ->capture_default_str();
  reward->add_option("--gamma", r_weights.gamma, "Correct-refusal reward")
      ->capture_default_str();
  reward->callback([&] { run_reward(r_responses, r_manifest, r_out, r_weights); });

  // eval
  std::string e_predictions, e_manifest, e_overlay, e_out, e_csv;
  auto* eval = app.add_subcommand(
      "eval", "Compute retrieval metrics for predictions against a manifest");
  eval->add_option("--predictions", e_predictions, "JSONL rows {qid, response}")
      ->required();
  eval->add_option("--manifest", e_manifest, "Manifest JSONL")->required();
  eval->add_option("--overlay", e_overlay,
                   "Optional correction overlay JSONL applied before scoring");
  eval->add_option("--out", e_out, "Output key=value report path")->required();
  eval->add_option("--csv", e_csv, "Also write the report as CSV to this path");
  eval->callback(
      [&] { run_eval(e_predictions, e_manifest, e_overlay, e_out, e_csv); });

  // augment
  std::string g_manifest, g_out;
  double g_ratio = 0.1;
  std::uint64_t g_seed = 7;
  auto* augment = app.add_subcommand(
      "augment", "Append mismatched irrelevant query/video pairs to a manifest");
  augment->add_option("--manifest", g_manifest, "Manifest JSONL")->required();
  augment->add_option("--ratio", g_ratio, "Irrelevant share of the output set")
      ->capture_default_str();
  augment->add_option("--seed", g_seed, "Pairing seed")->capture_default_str();
  augment->add_option("--out", g_out, "Output manifest path")->required();
  augment->callback([&] { run_augment(g_manifest, g_ratio, g_seed, g_out); });

  // simulate
  std::string m_manifest, m_out, m_config, m_report;
  tvg::SimConfig m_base;
  auto* sim = app.add_subcommand(
      "simulate", "Run the toy refusal/localization policy experiment");
  sim->add_option("--manifest", m_manifest, "Manifest JSONL (relevant and irrelevant)")
      ->required();
  sim->add_option("--out", m_out, "Trajectory CSV path")->required();
  sim->add_option("--config", m_config, "key=value config file (flags override it)");
  sim->add_option("--report", m_report, "Also write the final report to this path");
  long long m_group_size = m_base.group_size, m_iterations = m_base.iterations;
  long long m_start_bins = m_base.start_bins, m_length_bins = m_base.length_bins;
  double m_lr = m_base.learning_rate, m_ratio = m_base.irrelevant_ratio;
  double m_alpha = m_base.weights.alpha, m_beta = m_base.weights.beta;
  double m_gamma = m_base.weights.gamma, m_temperature = m_base.temperature;
  std::uint64_t m_seed = m_base.seed;
  sim->add_option("--group-size", m_group_size, "Rollouts per sampled query")
      ->capture_default_str();
  sim->add_option("--iterations", m_iterations, "Training iterations")
      ->capture_default_str();
  sim->add_option("--learning-rate", m_lr, "Logit step size")->capture_default_str();
  sim->add_option("--ratio", m_ratio, "Probability a training draw is irrelevant")
      ->capture_default_str();
  sim->add_option("--alpha", m_alpha, "Format reward weight")->capture_default_str();
  sim->add_option("--beta", m_beta, "Precision reward weight")->capture_default_str();
  sim->add_option("--gamma", m_gamma, "Correct-refusal reward")->capture_default_str();
  sim->add_option("--start-bins", m_start_bins, "Interval grid start bins")
      ->capture_default_str();
  sim->add_option("--length-bins", m_length_bins, "Interval grid length bins")
      ->capture_default_str();
  sim->add_option("--temperature", m_temperature, "Softmax temperature")
      ->capture_default_str();
  sim->add_option("--seed", m_seed, "Experiment seed")->capture_default_str();
  sim->callback([&] {
    tvg::SimConfig cfg = m_base;
    if (!m_config.empty()) cfg = tvg::load_sim_config(m_config, cfg);
    if (sim->count("--group-size")) cfg.group_size = static_cast<int>(m_group_size);
    if (sim->count("--iterations")) cfg.iterations = m_iterations;
    if (sim->count("--learning-rate")) cfg.learning_rate = m_lr;
    if (sim->count("--ratio")) cfg.irrelevant_ratio = m_ratio;
    if (sim->count("--alpha")) cfg.weights.alpha = m_alpha;
    if (sim->count("--beta")) cfg.weights.beta = m_beta;
    if (sim->count("--gamma")) cfg.weights.gamma = m_gamma;
    if (sim->count("--start-bins")) cfg.start_bins = static_cast<int>(m_start_bins);
    if (sim->count("--length-bins")) cfg.length_bins = static_cast<int>(m_length_bins);
    if (sim->count("--temperature")) cfg.temperature = m_temperature;
    if (sim->count("--seed")) cfg.seed = m_seed;
    run_simulate(cfg, m_manifest, m_out, m_report);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const tvg::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << " (minimum feasible budget: "
              << e.required_minimum() << ")\n";
    return 3;
  } catch (const tvg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
