#pragma once

#include <map>
#include <string>
#include <vector>

#include "trajmoment/config.hpp"
#include "trajmoment/matrix.hpp"
#include "trajmoment/records.hpp"

namespace trajmoment {

// Binary feature file: magic "TRJF", version u16, rows u32, cols u32, then
// rows*cols little-endian 32-bit floats, row-major. Used for .vfeat (video
// clips), .afeat (action clips) and .qfeat (query tokens) files.
inline constexpr char kFeatureMagic[4] = {'T', 'R', 'J', 'F'};
inline constexpr std::uint16_t kFeatureVersion = 1;

MatF read_feature_file(const std::string& path);
void write_feature_file(const MatF& matrix, const std::string& path);

// Per-trajectory feature matrices; rows are 2-second clips.
struct FeatureBundle {
  MatF video_clip;
  MatF action_clip;
};

enum class FeatureMode { kVideoOnly, kVideoPlusActions };

const char* feature_mode_name(FeatureMode mode);
FeatureMode feature_mode_from_name(const std::string& name);

// video_only returns the video matrix; video_plus_actions concatenates video
// and action features per row.
MatF assemble_trajectory_features(const FeatureBundle& bundle, FeatureMode mode);

struct SynthConfig {
  int num_trajectories = 200;
  int segments_min = 3;
  int segments_max = 6;
  int clip_feature_dim = 32;
  int query_feature_dim = 16;
  int action_feature_dim = 16;
  double noise_std = 0.1;
  double action_noise_std = 0.02;
  int segment_len_min = 4;   // seconds
  int segment_len_max = 12;  // seconds
  std::uint64_t seed = 0;

  static SynthConfig from_config(const FlatConfig& cfg);
  void validate() const;
};

struct SynthResult {
  Dataset dataset;
  SplitSpec splits;
  std::map<std::string, FeatureBundle> bundles;     // by vid
  std::map<std::string, MatF> query_features;       // by qid
};

// Generates a dataset where each trajectory is a sequence of segments, each
// with a latent concept vector. Clip features are the concept plus noise,
// query token features are a fixed projection of the same concept plus
// noise, and action features embed a per-segment action name. Ground-truth
// windows tile each trajectory. Pure function of the seed.
SynthResult synth_generate(const SynthConfig& config);

// Writes dataset.jsonl, trajectories.jsonl, stats.json, splits.json and a
// features/ directory with .vfeat/.afeat/.qfeat files.
void write_synth_result(const SynthResult& result, const std::string& out_dir);

// Loads every trajectory's assembled features and every query's features
// from a features directory, keyed by vid / qid.
class FeatureStore {
 public:
  FeatureStore(const std::string& features_dir, const Dataset& dataset, FeatureMode mode);

  const MatF& trajectory_features(const std::string& vid) const;
  const MatF& query_features(const std::string& qid) const;

  int trajectory_dim() const { return traj_dim_; }
  int query_dim() const { return query_dim_; }

 private:
  std::map<std::string, MatF> traj_;
  std::map<std::string, MatF> query_;
  int traj_dim_ = 0;
  int query_dim_ = 0;
};

}  // namespace trajmoment
