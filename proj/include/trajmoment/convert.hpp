#pragma once

#include <string>
#include <utility>
#include <vector>

#include "trajmoment/config.hpp"
#include "trajmoment/records.hpp"
#include "trajmoment/span.hpp"

namespace trajmoment {

// One instruction-annotated trajectory log as read from disk, before
// conversion to the changepoint-detection dataset format.
struct RawInstruction {
  std::string text;
  int first_frame = 0;
  int last_frame = 0;  // inclusive
};

struct RawAction {
  std::string name;
  std::vector<int> frames;
};

struct RawTrial {
  std::string trial_id;
  std::string goal_text;
  int num_frames = 0;
  std::vector<RawInstruction> instructions;
  std::vector<RawAction> actions;
};

// JSON field names for trial logs. Schemas of upstream simulators differ, so
// every name can be remapped via a flat key=value mapping file.
struct FieldMapping {
  std::string trial_id = "trial_id";
  std::string goal = "goal";
  std::string num_frames = "num_frames";
  std::string instructions = "instructions";
  std::string instruction_text = "text";
  std::string instruction_frames = "frames";
  std::string actions = "actions";
  std::string action_name = "name";
  std::string action_frames = "frames";

  static FieldMapping from_config(const FlatConfig& cfg);
};

inline constexpr double kDefaultFps = 5.0;

// Maps an inclusive frame range to a window in seconds. Frame f occurs at
// second floor(f / fps); a range collapsing to a single second is rounded
// outward to a 1-second window.
TemporalSpan frames_to_span(int first_frame, int last_frame, double fps);

// Labels every clip with the action covering the majority of its frames:
// each second takes the action covering most of its frames (tie -> earlier
// action in the list), each clip takes the majority label of its seconds
// (tie -> earlier second). Rejects frames not covered by any action.
std::vector<std::string> map_actions_to_clips(const std::vector<RawAction>& actions,
                                              double fps, int num_frames,
                                              const ClipGrid& grid);

// Collects every problem in the trial; returns an empty list when valid.
std::vector<std::string> validate_trial(const RawTrial& raw);

std::pair<TrajectoryRecord, std::vector<QueryRecord>> convert_trial(const RawTrial& raw,
                                                                    double fps = kDefaultFps);

StatsReport dataset_stats(const Dataset& dataset, double fps = kDefaultFps);

RawTrial load_raw_trial(const std::string& trial_dir, const FieldMapping& mapping);

// Scans input_dir for trial directories (sorted by name), converts each, and
// writes dataset.jsonl, trajectories.jsonl, stats.json into out_dir.
Dataset run_conversion(const std::string& input_dir, const std::string& out_dir, double fps,
                       const FieldMapping& mapping);

}  // namespace trajmoment
