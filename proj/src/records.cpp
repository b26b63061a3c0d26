#include "trajmoment/records.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace trajmoment {

using ordered_json = nlohmann::ordered_json;

const TrajectoryRecord& Dataset::trajectory_for(const std::string& vid) const {
  for (const auto& t : trajectories)
    if (t.vid == vid) return t;
  throw Error(ErrorCode::ValidationError, "no trajectory with vid " + vid);
}

std::vector<const QueryRecord*> Dataset::queries_for_vids(
    const std::vector<std::string>& vids) const {
  std::vector<const QueryRecord*> out;
  for (const auto& q : queries)
    for (const auto& v : vids)
      if (q.vid == v) {
        out.push_back(&q);
        break;
      }
  return out;
}

std::size_t count_tokens(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  std::size_t n = 0;
  while (in >> tok) ++n;
  return n;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open for reading: " + path);
  return in;
}

ordered_json query_to_json(const QueryRecord& q, double duration) {
  ordered_json j;
  j["qid"] = q.qid;
  j["query"] = q.query;
  j["vid"] = q.vid;
  j["duration"] = duration;
  ordered_json windows = ordered_json::array();
  for (const auto& w : q.relevant_windows) windows.push_back({w.start, w.end});
  j["relevant_windows"] = windows;
  j["relevant_clip_ids"] = q.relevant_clip_ids;
  j["saliency_scores"] = q.saliency_scores;
  return j;
}

}  // namespace

void write_dataset_jsonl(const Dataset& dataset, const std::string& path) {
  auto out = open_out(path);
  for (const auto& q : dataset.queries) {
    double duration = dataset.trajectory_for(q.vid).duration;
    out << query_to_json(q, duration).dump() << "\n";
  }
}

void write_trajectories_jsonl(const std::vector<TrajectoryRecord>& trajectories,
                              const std::string& path) {
  auto out = open_out(path);
  for (const auto& t : trajectories) {
    ordered_json j;
    j["vid"] = t.vid;
    j["duration"] = t.duration;
    j["clip_len"] = t.grid.clip_len;
    j["num_clips"] = t.grid.num_clips;
    j["actions_per_clip"] = t.actions_per_clip;
    out << j.dump() << "\n";
  }
}

std::vector<QueryRecord> read_dataset_jsonl(const std::string& path) {
  auto in = open_in(path);
  std::vector<QueryRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ordered_json j = ordered_json::parse(line);
    QueryRecord q;
    q.qid = j.at("qid").get<std::string>();
    q.query = j.at("query").get<std::string>();
    q.vid = j.at("vid").get<std::string>();
    for (const auto& w : j.at("relevant_windows"))
      q.relevant_windows.emplace_back(w.at(0).get<double>(), w.at(1).get<double>());
    q.relevant_clip_ids = j.at("relevant_clip_ids").get<std::vector<int>>();
    q.saliency_scores = j.at("saliency_scores").get<std::vector<int>>();
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<TrajectoryRecord> read_trajectories_jsonl(const std::string& path) {
  auto in = open_in(path);
  std::vector<TrajectoryRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ordered_json j = ordered_json::parse(line);
    TrajectoryRecord t;
    t.vid = j.at("vid").get<std::string>();
    t.duration = j.at("duration").get<double>();
    t.grid = ClipGrid(t.duration, j.at("clip_len").get<double>());
    t.actions_per_clip = j.at("actions_per_clip").get<std::vector<std::string>>();
    if ((int)t.actions_per_clip.size() != t.grid.num_clips)
      throw Error(ErrorCode::ValidationError, "actions_per_clip length mismatch for " + t.vid);
    out.push_back(std::move(t));
  }
  return out;
}

void write_stats_json(const StatsReport& stats, const std::string& path) {
  ordered_json j;
  j["num_queries"] = stats.num_queries;
  j["num_trajectories"] = stats.num_trajectories;
  j["avg_query_len"] = stats.avg_query_len;
  j["avg_discrete_actions"] = stats.avg_discrete_actions;
  j["avg_instructions_per_trajectory"] = stats.avg_instructions_per_trajectory;
  j["avg_moment_len_seconds"] = stats.avg_moment_len_seconds;
  j["avg_trajectory_len_seconds"] = stats.avg_trajectory_len_seconds;
  j["avg_frames_per_trajectory"] = stats.avg_frames_per_trajectory;
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

void write_splits_json(const SplitSpec& splits, const std::string& path) {
  ordered_json j;
  j["train"] = splits.train;
  j["val"] = splits.val;
  j["test"] = splits.test;
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

SplitSpec read_splits_json(const std::string& path) {
  auto in = open_in(path);
  ordered_json j = ordered_json::parse(in);
  SplitSpec s;
  s.train = j.at("train").get<std::vector<std::string>>();
  s.val = j.at("val").get<std::vector<std::string>>();
  s.test = j.at("test").get<std::vector<std::string>>();
  return s;
}

Dataset load_dataset_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  Dataset d;
  d.trajectories = read_trajectories_jsonl((fs::path(dir) / "trajectories.jsonl").string());
  d.queries = read_dataset_jsonl((fs::path(dir) / "dataset.jsonl").string());
  if (d.queries.empty()) throw Error(ErrorCode::EmptyDataset, "no queries in " + dir);
  return d;
}

}  // namespace trajmoment
