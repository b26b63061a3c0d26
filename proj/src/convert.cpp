#include "trajmoment/convert.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace trajmoment {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

FieldMapping FieldMapping::from_config(const FlatConfig& cfg) {
  FieldMapping m;
  m.trial_id = cfg.get_str("trial_id", m.trial_id);
  m.goal = cfg.get_str("goal", m.goal);
  m.num_frames = cfg.get_str("num_frames", m.num_frames);
  m.instructions = cfg.get_str("instructions", m.instructions);
  m.instruction_text = cfg.get_str("instruction_text", m.instruction_text);
  m.instruction_frames = cfg.get_str("instruction_frames", m.instruction_frames);
  m.actions = cfg.get_str("actions", m.actions);
  m.action_name = cfg.get_str("action_name", m.action_name);
  m.action_frames = cfg.get_str("action_frames", m.action_frames);
  return m;
}

TemporalSpan frames_to_span(int first_frame, int last_frame, double fps) {
  if (!(fps > 0)) throw Error(ErrorCode::ValidationError, "fps must be positive");
  if (first_frame < 0 || last_frame < first_frame)
    throw Error(ErrorCode::ValidationError,
                "bad frame range [" + std::to_string(first_frame) + ", " +
                    std::to_string(last_frame) + "]");
  double start = std::floor(first_frame / fps);
  double end = std::floor(last_frame / fps);
  if (end <= start) end = start + 1.0;
  return TemporalSpan(start, end);
}

namespace {

// Action label per second; -1 where no frame of the second is covered.
std::vector<int> label_seconds(const std::vector<RawAction>& actions, double fps,
                               int num_frames, int num_seconds) {
  std::vector<std::vector<int>> coverage((std::size_t)num_frames);
  for (std::size_t a = 0; a < actions.size(); ++a)
    for (int f : actions[a].frames)
      if (f >= 0 && f < num_frames) coverage[(std::size_t)f].push_back((int)a);

  std::vector<int> labels((std::size_t)num_seconds, -1);
  std::vector<int> counts(actions.size());
  for (int s = 0; s < num_seconds; ++s) {
    int f0 = (int)std::floor(s * fps);
    int f1 = std::min((int)std::floor((s + 1) * fps), num_frames);
    std::fill(counts.begin(), counts.end(), 0);
    bool any = false;
    for (int f = f0; f < f1; ++f)
      for (int a : coverage[(std::size_t)f]) {
        ++counts[(std::size_t)a];
        any = true;
      }
    if (!any) continue;
    int best = -1;
    for (std::size_t a = 0; a < counts.size(); ++a)
      if (counts[a] > 0 && (best < 0 || counts[a] > counts[(std::size_t)best])) best = (int)a;
    labels[(std::size_t)s] = best;
  }
  return labels;
}

}  // namespace

std::vector<std::string> map_actions_to_clips(const std::vector<RawAction>& actions,
                                              double fps, int num_frames,
                                              const ClipGrid& grid) {
  if (num_frames <= 0) throw Error(ErrorCode::ValidationError, "num_frames must be positive");

  std::vector<bool> covered((std::size_t)num_frames, false);
  for (const auto& a : actions)
    for (int f : a.frames)
      if (f >= 0 && f < num_frames) covered[(std::size_t)f] = true;
  std::vector<int> uncovered;
  for (int f = 0; f < num_frames; ++f)
    if (!covered[(std::size_t)f]) uncovered.push_back(f);
  if (!uncovered.empty()) {
    std::string msg = "frames not covered by any action:";
    for (std::size_t i = 0; i < uncovered.size() && i < 10; ++i)
      msg += " " + std::to_string(uncovered[i]);
    if (uncovered.size() > 10) msg += " ... (" + std::to_string(uncovered.size()) + " total)";
    throw Error(ErrorCode::ValidationError, msg);
  }

  int num_seconds = (int)std::ceil(grid.duration);
  std::vector<int> second_labels = label_seconds(actions, fps, num_frames, num_seconds);

  std::vector<std::string> per_clip((std::size_t)grid.num_clips);
  std::vector<int> counts(actions.size());
  for (int c = 0; c < grid.num_clips; ++c) {
    int s0 = (int)std::llround(c * grid.clip_len);
    int s1 = std::min((int)std::llround((c + 1) * grid.clip_len), num_seconds);
    std::fill(counts.begin(), counts.end(), 0);
    int label = -1;
    int best_count = 0;
    // Majority label over the clip's seconds; on a tie the earlier second's
    // action wins because only a strictly larger count replaces the label.
    for (int s = s0; s < s1; ++s) {
      int a = second_labels[(std::size_t)s];
      if (a < 0) continue;
      if (++counts[(std::size_t)a] > best_count) {
        best_count = counts[(std::size_t)a];
        label = a;
      }
    }
    if (label < 0)
      throw Error(ErrorCode::ValidationError, "clip " + std::to_string(c) + " has no action");
    per_clip[(std::size_t)c] = actions[(std::size_t)label].name;
  }
  return per_clip;
}

std::vector<std::string> validate_trial(const RawTrial& raw) {
  std::vector<std::string> problems;
  if (raw.trial_id.empty()) problems.push_back("trial has empty trial_id");
  if (raw.num_frames <= 0) {
    problems.push_back("trial " + raw.trial_id + " has no frames");
    return problems;
  }
  for (std::size_t i = 0; i < raw.instructions.size(); ++i) {
    const auto& ins = raw.instructions[i];
    if (ins.first_frame < 0 || ins.last_frame < ins.first_frame ||
        ins.last_frame >= raw.num_frames)
      problems.push_back("instruction " + std::to_string(i) + " frame range [" +
                         std::to_string(ins.first_frame) + ", " +
                         std::to_string(ins.last_frame) + "] outside [0, " +
                         std::to_string(raw.num_frames) + ")");
    if (ins.text.empty())
      problems.push_back("instruction " + std::to_string(i) + " has empty text");
  }
  std::vector<bool> covered((std::size_t)raw.num_frames, false);
  for (std::size_t a = 0; a < raw.actions.size(); ++a) {
    const auto& act = raw.actions[a];
    if (act.frames.empty()) {
      problems.push_back("action " + std::to_string(a) + " (" + act.name + ") has no frames");
      continue;
    }
    if (!std::is_sorted(act.frames.begin(), act.frames.end()))
      problems.push_back("action " + std::to_string(a) + " (" + act.name +
                         ") frames not in order");
    for (int f : act.frames) {
      if (f < 0 || f >= raw.num_frames) {
        problems.push_back("action " + std::to_string(a) + " (" + act.name + ") frame " +
                           std::to_string(f) + " outside [0, " +
                           std::to_string(raw.num_frames) + ")");
      } else {
        covered[(std::size_t)f] = true;
      }
    }
  }
  std::size_t n_uncovered = 0;
  for (bool c : covered)
    if (!c) ++n_uncovered;
  if (n_uncovered > 0)
    problems.push_back("trial " + raw.trial_id + " has " + std::to_string(n_uncovered) +
                       " frames not covered by any action");
  return problems;
}

std::pair<TrajectoryRecord, std::vector<QueryRecord>> convert_trial(const RawTrial& raw,
                                                                    double fps) {
  auto problems = validate_trial(raw);
  if (!problems.empty()) {
    std::string msg = "trial " + raw.trial_id + ":";
    for (const auto& p : problems) msg += "\n  " + p;
    throw Error(ErrorCode::ValidationError, msg);
  }

  TrajectoryRecord traj;
  traj.vid = raw.trial_id;
  traj.duration = raw.num_frames / fps;
  traj.grid = ClipGrid(traj.duration, 2.0);
  traj.actions_per_clip = map_actions_to_clips(raw.actions, fps, raw.num_frames, traj.grid);

  std::vector<QueryRecord> queries;
  queries.reserve(raw.instructions.size());
  for (std::size_t i = 0; i < raw.instructions.size(); ++i) {
    const auto& ins = raw.instructions[i];
    QueryRecord q;
    q.qid = raw.trial_id + "_" + std::to_string(i);
    q.vid = raw.trial_id;
    q.query = ins.text;
    TemporalSpan window = frames_to_span(ins.first_frame, ins.last_frame, fps);
    q.relevant_windows.push_back(window);
    q.relevant_clip_ids = clip_ids_for_span(window, traj.grid);
    q.saliency_scores.assign(q.relevant_clip_ids.size(), 4);
    queries.push_back(std::move(q));
  }
  return {std::move(traj), std::move(queries)};
}

StatsReport dataset_stats(const Dataset& dataset, double fps) {
  if (dataset.queries.empty() || dataset.trajectories.empty())
    throw Error(ErrorCode::EmptyDataset, "dataset_stats needs a non-empty dataset");

  StatsReport r;
  r.num_queries = dataset.queries.size();
  r.num_trajectories = dataset.trajectories.size();

  double token_sum = 0.0;
  double moment_len_sum = 0.0;
  std::size_t moment_count = 0;
  for (const auto& q : dataset.queries) {
    token_sum += (double)count_tokens(q.query);
    for (const auto& w : q.relevant_windows) {
      moment_len_sum += w.length();
      ++moment_count;
    }
  }
  r.avg_query_len = token_sum / (double)r.num_queries;
  r.avg_moment_len_seconds = moment_count ? moment_len_sum / (double)moment_count : 0.0;

  double duration_sum = 0.0;
  double action_runs_sum = 0.0;
  for (const auto& t : dataset.trajectories) {
    duration_sum += t.duration;
    // Discrete action count is the number of consecutive runs in the
    // per-clip labels; the raw pre-clip action list is not retained.
    std::size_t runs = t.actions_per_clip.empty() ? 0 : 1;
    for (std::size_t i = 1; i < t.actions_per_clip.size(); ++i)
      if (t.actions_per_clip[i] != t.actions_per_clip[i - 1]) ++runs;
    action_runs_sum += (double)runs;
  }
  r.avg_trajectory_len_seconds = duration_sum / (double)r.num_trajectories;
  r.avg_frames_per_trajectory = r.avg_trajectory_len_seconds * fps;
  r.avg_discrete_actions = action_runs_sum / (double)r.num_trajectories;
  r.avg_instructions_per_trajectory = (double)r.num_queries / (double)r.num_trajectories;
  return r;
}

RawTrial load_raw_trial(const std::string& trial_dir, const FieldMapping& mapping) {
  fs::path file = fs::path(trial_dir) / "traj_data.json";
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + file.string());
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ValidationError, file.string() + ": " + e.what());
  }

  RawTrial raw;
  raw.trial_id = j.value(mapping.trial_id, fs::path(trial_dir).filename().string());
  raw.goal_text = j.value(mapping.goal, std::string());
  if (!j.contains(mapping.num_frames))
    throw Error(ErrorCode::ValidationError,
                file.string() + ": missing field '" + mapping.num_frames + "'");
  raw.num_frames = j.at(mapping.num_frames).get<int>();
  for (const auto& ji : j.value(mapping.instructions, ordered_json::array())) {
    RawInstruction ins;
    ins.text = ji.at(mapping.instruction_text).get<std::string>();
    const auto& fr = ji.at(mapping.instruction_frames);
    ins.first_frame = fr.at(0).get<int>();
    ins.last_frame = fr.at(1).get<int>();
    raw.instructions.push_back(std::move(ins));
  }
  for (const auto& ja : j.value(mapping.actions, ordered_json::array())) {
    RawAction act;
    act.name = ja.at(mapping.action_name).get<std::string>();
    act.frames = ja.at(mapping.action_frames).get<std::vector<int>>();
    raw.actions.push_back(std::move(act));
  }
  return raw;
}

Dataset run_conversion(const std::string& input_dir, const std::string& out_dir, double fps,
                       const FieldMapping& mapping) {
  std::vector<std::string> trial_dirs;
  for (const auto& entry : fs::directory_iterator(input_dir))
    if (entry.is_directory() && fs::exists(entry.path() / "traj_data.json"))
      trial_dirs.push_back(entry.path().string());
  std::sort(trial_dirs.begin(), trial_dirs.end());
  if (trial_dirs.empty())
    throw Error(ErrorCode::EmptyDataset, "no trial directories under " + input_dir);

  std::vector<std::pair<TrajectoryRecord, std::vector<QueryRecord>>> converted(
      trial_dirs.size());
  std::vector<std::string> failures(trial_dirs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long i = 0; i < (long long)trial_dirs.size(); ++i) {
    try {
      RawTrial raw = load_raw_trial(trial_dirs[(std::size_t)i], mapping);
      converted[(std::size_t)i] = convert_trial(raw, fps);
    } catch (const Error& e) {
      failures[(std::size_t)i] = e.what();
    }
  }
  std::string all_failures;
  for (const auto& f : failures)
    if (!f.empty()) all_failures += (all_failures.empty() ? "" : "\n") + f;
  if (!all_failures.empty()) throw Error(ErrorCode::ValidationError, all_failures);

  Dataset dataset;
  for (auto& [traj, queries] : converted) {
    dataset.trajectories.push_back(std::move(traj));
    for (auto& q : queries) dataset.queries.push_back(std::move(q));
  }

  fs::create_directories(out_dir);
  write_trajectories_jsonl(dataset.trajectories, (fs::path(out_dir) / "trajectories.jsonl").string());
  write_dataset_jsonl(dataset, (fs::path(out_dir) / "dataset.jsonl").string());
  write_stats_json(dataset_stats(dataset, fps), (fs::path(out_dir) / "stats.json").string());
  return dataset;
}

}  // namespace trajmoment
