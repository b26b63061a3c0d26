#pragma once

#include <map>
#include <string>
#include <vector>

#include "trajmoment/span.hpp"

namespace trajmoment {

struct TrajectoryRecord {
  std::string vid;
  double duration = 0.0;
  ClipGrid grid{1.0};
  std::vector<std::string> actions_per_clip;  // one action name per clip
};

struct QueryRecord {
  std::string qid;
  std::string vid;
  std::string query;
  std::vector<TemporalSpan> relevant_windows;
  std::vector<int> relevant_clip_ids;
  std::vector<int> saliency_scores;  // 0-4 per relevant clip
};

struct StatsReport {
  std::size_t num_queries = 0;
  std::size_t num_trajectories = 0;
  double avg_query_len = 0.0;  // whitespace tokens
  double avg_discrete_actions = 0.0;
  double avg_instructions_per_trajectory = 0.0;
  double avg_moment_len_seconds = 0.0;
  double avg_trajectory_len_seconds = 0.0;
  double avg_frames_per_trajectory = 0.0;
};

struct Dataset {
  std::vector<TrajectoryRecord> trajectories;
  std::vector<QueryRecord> queries;

  const TrajectoryRecord& trajectory_for(const std::string& vid) const;
  std::vector<const QueryRecord*> queries_for_vids(const std::vector<std::string>& vids) const;
};

// Trajectory-level split assignment; every vid appears in exactly one list.
struct SplitSpec {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
};

std::size_t count_tokens(const std::string& text);

void write_dataset_jsonl(const Dataset& dataset, const std::string& path);
void write_trajectories_jsonl(const std::vector<TrajectoryRecord>& trajectories,
                              const std::string& path);
std::vector<QueryRecord> read_dataset_jsonl(const std::string& path);
std::vector<TrajectoryRecord> read_trajectories_jsonl(const std::string& path);

void write_stats_json(const StatsReport& stats, const std::string& path);

void write_splits_json(const SplitSpec& splits, const std::string& path);
SplitSpec read_splits_json(const std::string& path);

// Loads dataset.jsonl + trajectories.jsonl from a dataset directory.
Dataset load_dataset_dir(const std::string& dir);

}  // namespace trajmoment
