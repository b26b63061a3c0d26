#include "trajmoment/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "trajmoment/convert.hpp"
#include "trajmoment/span.hpp"

namespace trajmoment {

namespace fs = std::filesystem;

MatF read_feature_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);

  char magic[4];
  if (!in.read(magic, 4)) throw Error(ErrorCode::TruncatedFile, path + ": missing header");
  if (std::memcmp(magic, kFeatureMagic, 4) != 0)
    throw Error(ErrorCode::BadMagic, path + ": not a TRJF file");

  std::uint16_t version = 0;
  std::uint32_t rows = 0, cols = 0;
  if (!in.read(reinterpret_cast<char*>(&version), sizeof version) ||
      !in.read(reinterpret_cast<char*>(&rows), sizeof rows) ||
      !in.read(reinterpret_cast<char*>(&cols), sizeof cols))
    throw Error(ErrorCode::TruncatedFile, path + ": missing header");
  if (version != kFeatureVersion)
    throw Error(ErrorCode::BadMagic,
                path + ": unsupported version " + std::to_string(version));

  MatF m(rows, cols);
  std::size_t bytes = (std::size_t)rows * cols * sizeof(float);
  if (bytes > 0 && !in.read(reinterpret_cast<char*>(m.data.data()), (std::streamsize)bytes))
    throw Error(ErrorCode::TruncatedFile, path + ": payload shorter than header promises");
  for (float v : m.data)
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, path + ": non-finite value");
  return m;
}

void write_feature_file(const MatF& matrix, const std::string& path) {
  for (float v : matrix.data)
    if (!std::isfinite(v))
      throw Error(ErrorCode::NonFiniteValue, path + ": refusing to write non-finite value");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open for writing: " + path);
  out.write(kFeatureMagic, 4);
  std::uint16_t version = kFeatureVersion;
  std::uint32_t rows = (std::uint32_t)matrix.rows;
  std::uint32_t cols = (std::uint32_t)matrix.cols;
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  out.write(reinterpret_cast<const char*>(&cols), sizeof cols);
  out.write(reinterpret_cast<const char*>(matrix.data.data()),
            (std::streamsize)(matrix.data.size() * sizeof(float)));
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path);
}

const char* feature_mode_name(FeatureMode mode) {
  return mode == FeatureMode::kVideoOnly ? "video_only" : "video_plus_actions";
}

FeatureMode feature_mode_from_name(const std::string& name) {
  if (name == "video_only") return FeatureMode::kVideoOnly;
  if (name == "video_plus_actions") return FeatureMode::kVideoPlusActions;
  throw Error(ErrorCode::BadConfig, "unknown feature mode: " + name);
}

MatF assemble_trajectory_features(const FeatureBundle& bundle, FeatureMode mode) {
  if (mode == FeatureMode::kVideoOnly) return bundle.video_clip;
  if (bundle.video_clip.rows != bundle.action_clip.rows)
    throw Error(ErrorCode::DimensionMismatch,
                "video rows " + std::to_string(bundle.video_clip.rows) +
                    " != action rows " + std::to_string(bundle.action_clip.rows));
  MatF out(bundle.video_clip.rows, bundle.video_clip.cols + bundle.action_clip.cols);
  for (std::size_t i = 0; i < out.rows; ++i) {
    std::copy(bundle.video_clip.row(i), bundle.video_clip.row(i) + bundle.video_clip.cols,
              out.row(i));
    std::copy(bundle.action_clip.row(i), bundle.action_clip.row(i) + bundle.action_clip.cols,
              out.row(i) + bundle.video_clip.cols);
  }
  return out;
}

SynthConfig SynthConfig::from_config(const FlatConfig& cfg) {
  SynthConfig c;
  c.num_trajectories = cfg.get_int("num_trajectories", c.num_trajectories);
  c.segments_min = cfg.get_int("segments_min", c.segments_min);
  c.segments_max = cfg.get_int("segments_max", c.segments_max);
  c.clip_feature_dim = cfg.get_int("clip_feature_dim", c.clip_feature_dim);
  c.query_feature_dim = cfg.get_int("query_feature_dim", c.query_feature_dim);
  c.action_feature_dim = cfg.get_int("action_feature_dim", c.action_feature_dim);
  c.noise_std = cfg.get_double("noise_std", c.noise_std);
  c.action_noise_std = cfg.get_double("action_noise_std", c.action_noise_std);
  c.segment_len_min = cfg.get_int("segment_len_min", c.segment_len_min);
  c.segment_len_max = cfg.get_int("segment_len_max", c.segment_len_max);
  c.seed = (std::uint64_t)cfg.get_int("seed", (int)c.seed);
  c.validate();
  return c;
}

void SynthConfig::validate() const {
  if (num_trajectories <= 0)
    throw Error(ErrorCode::BadConfig, "num_trajectories must be positive");
  if (segments_min < 1 || segments_max < segments_min)
    throw Error(ErrorCode::BadConfig, "bad segments range");
  if (clip_feature_dim < 4 || query_feature_dim < 4 || action_feature_dim < 4)
    throw Error(ErrorCode::BadConfig, "feature dims must be >= 4");
  if (noise_std < 0 || action_noise_std < 0)
    throw Error(ErrorCode::BadConfig, "noise_std must be >= 0");
  if (segment_len_min < 2 || segment_len_max < segment_len_min)
    throw Error(ErrorCode::BadConfig, "bad segment length range");
}

namespace {

const std::vector<std::string>& action_vocab() {
  static const std::vector<std::string> names = {
      "MoveAhead", "RotateLeft", "RotateRight", "LookUp",
      "LookDown",  "PickupObject", "PutObject", "ToggleObjectOn"};
  return names;
}

const std::vector<std::string>& word_vocab() {
  static const std::vector<std::string> words = {
      "walk",  "turn",  "pick",  "place", "to",    "the",   "left",  "right",
      "table", "lamp",  "vase",  "desk",  "ahead", "around", "then", "toward",
      "shelf", "mug",   "up",    "down",  "stop",  "at",     "face", "grab"};
  return words;
}

}  // namespace

SynthResult synth_generate(const SynthConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const auto& actions = action_vocab();
  const auto& words = word_vocab();

  // Fixed per-seed action embeddings and concept-to-query projection.
  std::vector<std::vector<double>> action_embed(actions.size());
  for (auto& e : action_embed) {
    e.resize((std::size_t)config.action_feature_dim);
    for (auto& v : e) v = gauss(rng);
  }
  MatD proj((std::size_t)config.query_feature_dim, (std::size_t)config.clip_feature_dim);
  double proj_scale = 1.0 / std::sqrt((double)config.clip_feature_dim);
  for (auto& v : proj.data) v = gauss(rng) * proj_scale;

  SynthResult result;
  for (int t = 0; t < config.num_trajectories; ++t) {
    std::string vid = "synth_" + std::to_string(t);

    int num_segments =
        (int)(rng() % (std::uint64_t)(config.segments_max - config.segments_min + 1)) +
        config.segments_min;
    std::vector<int> seg_len((std::size_t)num_segments);
    for (auto& l : seg_len)
      l = (int)(rng() % (std::uint64_t)(config.segment_len_max - config.segment_len_min + 1)) +
          config.segment_len_min;
    int duration_s = 0;
    std::vector<int> seg_start((std::size_t)num_segments);
    for (int s = 0; s < num_segments; ++s) {
      seg_start[(std::size_t)s] = duration_s;
      duration_s += seg_len[(std::size_t)s];
    }

    TrajectoryRecord traj;
    traj.vid = vid;
    traj.duration = (double)duration_s;
    traj.grid = ClipGrid(traj.duration, 2.0);

    std::vector<std::vector<double>> concepts((std::size_t)num_segments);
    for (auto& z : concepts) {
      z.resize((std::size_t)config.clip_feature_dim);
      for (auto& v : z) v = gauss(rng);
    }
    std::vector<int> seg_action((std::size_t)num_segments);
    for (int s = 0; s < num_segments; ++s) {
      int a = (int)(rng() % actions.size());
      if (s > 0 && a == seg_action[(std::size_t)s - 1]) a = (a + 1) % (int)actions.size();
      seg_action[(std::size_t)s] = a;
    }

    // Clip -> segment assignment by majority overlap (tie -> earlier segment).
    auto segment_of_clip = [&](int c) {
      double cs = c * traj.grid.clip_len;
      double ce = std::min((c + 1) * traj.grid.clip_len, traj.duration);
      int best = 0;
      double best_overlap = 0.0;
      for (int s = 0; s < num_segments; ++s) {
        double ss = (double)seg_start[(std::size_t)s];
        double se = ss + (double)seg_len[(std::size_t)s];
        double overlap = std::min(ce, se) - std::max(cs, ss);
        if (overlap > best_overlap) {
          best_overlap = overlap;
          best = s;
        }
      }
      return best;
    };

    int num_clips = traj.grid.num_clips;
    FeatureBundle bundle;
    bundle.video_clip = MatF((std::size_t)num_clips, (std::size_t)config.clip_feature_dim);
    bundle.action_clip = MatF((std::size_t)num_clips, (std::size_t)config.action_feature_dim);
    traj.actions_per_clip.resize((std::size_t)num_clips);
    for (int c = 0; c < num_clips; ++c) {
      int s = segment_of_clip(c);
      traj.actions_per_clip[(std::size_t)c] = actions[(std::size_t)seg_action[(std::size_t)s]];
      const auto& z = concepts[(std::size_t)s];
      for (int d = 0; d < config.clip_feature_dim; ++d)
        bundle.video_clip.at((std::size_t)c, (std::size_t)d) =
            (float)(z[(std::size_t)d] + config.noise_std * gauss(rng));
      const auto& ae = action_embed[(std::size_t)seg_action[(std::size_t)s]];
      for (int d = 0; d < config.action_feature_dim; ++d)
        bundle.action_clip.at((std::size_t)c, (std::size_t)d) =
            (float)(ae[(std::size_t)d] + config.action_noise_std * gauss(rng));
    }

    for (int s = 0; s < num_segments; ++s) {
      QueryRecord q;
      q.qid = vid + "_" + std::to_string(s);
      q.vid = vid;
      int num_tokens = (int)(rng() % 5) + 4;  // 4..8 tokens
      for (int w = 0; w < num_tokens; ++w) {
        if (w) q.query += " ";
        q.query += words[rng() % words.size()];
      }
      TemporalSpan window((double)seg_start[(std::size_t)s],
                          (double)(seg_start[(std::size_t)s] + seg_len[(std::size_t)s]));
      q.relevant_windows.push_back(window);
      q.relevant_clip_ids = clip_ids_for_span(window, traj.grid);
      q.saliency_scores.assign(q.relevant_clip_ids.size(), 4);

      // Token features: projection of the segment concept plus noise.
      std::vector<double> base((std::size_t)config.query_feature_dim, 0.0);
      const auto& z = concepts[(std::size_t)s];
      for (int r = 0; r < config.query_feature_dim; ++r) {
        double acc = 0.0;
        for (int d = 0; d < config.clip_feature_dim; ++d)
          acc += proj.at((std::size_t)r, (std::size_t)d) * z[(std::size_t)d];
        base[(std::size_t)r] = acc;
      }
      MatF qf((std::size_t)num_tokens, (std::size_t)config.query_feature_dim);
      for (int r = 0; r < num_tokens; ++r)
        for (int d = 0; d < config.query_feature_dim; ++d)
          qf.at((std::size_t)r, (std::size_t)d) =
              (float)(base[(std::size_t)d] + config.noise_std * gauss(rng));

      result.query_features[q.qid] = std::move(qf);
      result.dataset.queries.push_back(std::move(q));
    }

    result.bundles[vid] = std::move(bundle);
    result.dataset.trajectories.push_back(std::move(traj));
  }

  // Trajectory-level 80/10/10 split.
  std::vector<std::string> vids;
  for (const auto& t : result.dataset.trajectories) vids.push_back(t.vid);
  std::shuffle(vids.begin(), vids.end(), rng);
  std::size_t n = vids.size();
  std::size_t n_test = std::max<std::size_t>(1, n / 10);
  std::size_t n_val = std::max<std::size_t>(1, n / 10);
  if (n_test + n_val >= n) {
    n_test = n > 1 ? 1 : 0;
    n_val = n > 2 ? 1 : 0;
  }
  std::size_t n_train = n - n_val - n_test;
  result.splits.train.assign(vids.begin(), vids.begin() + (long)n_train);
  result.splits.val.assign(vids.begin() + (long)n_train, vids.begin() + (long)(n_train + n_val));
  result.splits.test.assign(vids.begin() + (long)(n_train + n_val), vids.end());
  std::sort(result.splits.train.begin(), result.splits.train.end());
  std::sort(result.splits.val.begin(), result.splits.val.end());
  std::sort(result.splits.test.begin(), result.splits.test.end());
  return result;
}

void write_synth_result(const SynthResult& result, const std::string& out_dir) {
  fs::create_directories(fs::path(out_dir) / "features");
  write_trajectories_jsonl(result.dataset.trajectories,
                           (fs::path(out_dir) / "trajectories.jsonl").string());
  write_dataset_jsonl(result.dataset, (fs::path(out_dir) / "dataset.jsonl").string());
  write_stats_json(dataset_stats(result.dataset), (fs::path(out_dir) / "stats.json").string());
  write_splits_json(result.splits, (fs::path(out_dir) / "splits.json").string());
  for (const auto& [vid, bundle] : result.bundles) {
    write_feature_file(bundle.video_clip,
                       (fs::path(out_dir) / "features" / (vid + ".vfeat")).string());
    write_feature_file(bundle.action_clip,
                       (fs::path(out_dir) / "features" / (vid + ".afeat")).string());
  }
  for (const auto& [qid, qf] : result.query_features)
    write_feature_file(qf, (fs::path(out_dir) / "features" / (qid + ".qfeat")).string());
}

FeatureStore::FeatureStore(const std::string& features_dir, const Dataset& dataset,
                           FeatureMode mode) {
  for (const auto& t : dataset.trajectories) {
    FeatureBundle bundle;
    fs::path vpath = fs::path(features_dir) / (t.vid + ".vfeat");
    bundle.video_clip = read_feature_file(vpath.string());
    if ((int)bundle.video_clip.rows != t.grid.num_clips)
      throw Error(ErrorCode::DataFeatureMismatch,
                  t.vid + ": " + std::to_string(bundle.video_clip.rows) +
                      " feature rows for " + std::to_string(t.grid.num_clips) + " clips");
    if (mode == FeatureMode::kVideoPlusActions) {
      fs::path apath = fs::path(features_dir) / (t.vid + ".afeat");
      if (!fs::exists(apath))
        throw Error(ErrorCode::MissingActionFeatures, "no action features: " + apath.string());
      bundle.action_clip = read_feature_file(apath.string());
    }
    MatF assembled = assemble_trajectory_features(bundle, mode);
    if (traj_dim_ == 0)
      traj_dim_ = (int)assembled.cols;
    else if (traj_dim_ != (int)assembled.cols)
      throw Error(ErrorCode::DataFeatureMismatch, t.vid + ": inconsistent feature width");
    traj_[t.vid] = std::move(assembled);
  }
  for (const auto& q : dataset.queries) {
    MatF qf = read_feature_file((fs::path(features_dir) / (q.qid + ".qfeat")).string());
    if (query_dim_ == 0)
      query_dim_ = (int)qf.cols;
    else if (query_dim_ != (int)qf.cols)
      throw Error(ErrorCode::DataFeatureMismatch, q.qid + ": inconsistent feature width");
    query_[q.qid] = std::move(qf);
  }
}

const MatF& FeatureStore::trajectory_features(const std::string& vid) const {
  auto it = traj_.find(vid);
  if (it == traj_.end()) throw Error(ErrorCode::DataFeatureMismatch, "no features for " + vid);
  return it->second;
}

const MatF& FeatureStore::query_features(const std::string& qid) const {
  auto it = query_.find(qid);
  if (it == query_.end()) throw Error(ErrorCode::UnknownQid, "no features for " + qid);
  return it->second;
}

}  // namespace trajmoment
