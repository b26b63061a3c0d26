#pragma once

#include <vector>

#include "trajmoment/error.hpp"

namespace trajmoment {

// Half-open [start, end) interval in seconds. Zero-length spans are rejected
// at construction; clip partitioning relies on the half-open convention.
struct TemporalSpan {
  double start;
  double end;

  TemporalSpan(double start_s, double end_s);

  double length() const { return end - start; }

  bool operator==(const TemporalSpan& other) const {
    return start == other.start && end == other.end;
  }
};

// Fixed-length clip partition of a trajectory. Clip i covers
// [i*clip_len, min((i+1)*clip_len, duration)); a final short clip is kept
// when the duration is not a multiple of clip_len.
struct ClipGrid {
  double clip_len;
  double duration;
  int num_clips;

  explicit ClipGrid(double duration_s, double clip_len_s = 2.0);

  TemporalSpan clip_span(int i) const;
};

struct Prediction {
  TemporalSpan span;
  double confidence;  // foreground probability

  Prediction(TemporalSpan s, double conf);
};

// Per-clip saliency scores; length must equal the owning grid's num_clips.
struct SaliencyVector {
  std::vector<double> scores;
};

double span_iou(const TemporalSpan& a, const TemporalSpan& b);

// IoU minus the hull fraction not covered by the union; in (-1, 1].
double span_giou(const TemporalSpan& a, const TemporalSpan& b);

// Maps a normalized (center, width) pair to a span in seconds, clamped to
// [0, duration]. Rejects width <= 0.
TemporalSpan span_from_center_width(double center, double width, double duration);

// Exact inverse of span_from_center_width for spans fully inside [0, duration].
void span_to_center_width(const TemporalSpan& span, double duration, double& center,
                          double& width);

// Indices of every clip whose interval intersects the span with positive
// length; ascending and contiguous, non-empty for positive-length spans.
std::vector<int> clip_ids_for_span(const TemporalSpan& span, const ClipGrid& grid);

}  // namespace trajmoment
