#include "trajmoment/span.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace trajmoment {

TemporalSpan::TemporalSpan(double start_s, double end_s) : start(start_s), end(end_s) {
  if (!(start >= 0.0) || !std::isfinite(start) || !std::isfinite(end)) {
    throw Error(ErrorCode::ValidationError,
                "span start must be finite and non-negative, got [" +
                    std::to_string(start) + ", " + std::to_string(end) + ")");
  }
  if (!(end > start)) {
    throw Error(ErrorCode::ValidationError,
                "span must have positive length, got [" + std::to_string(start) + ", " +
                    std::to_string(end) + ")");
  }
}

ClipGrid::ClipGrid(double duration_s, double clip_len_s)
    : clip_len(clip_len_s), duration(duration_s) {
  if (!(duration > 0.0) || !std::isfinite(duration))
    throw Error(ErrorCode::ValidationError, "grid duration must be positive");
  if (!(clip_len > 0.0) || !std::isfinite(clip_len))
    throw Error(ErrorCode::ValidationError, "clip length must be positive");
  num_clips = (int)std::ceil(duration / clip_len);
}

TemporalSpan ClipGrid::clip_span(int i) const {
  if (i < 0 || i >= num_clips)
    throw Error(ErrorCode::ValidationError, "clip index out of range: " + std::to_string(i));
  double s = i * clip_len;
  double e = std::min((i + 1) * clip_len, duration);
  return TemporalSpan(s, e);
}

Prediction::Prediction(TemporalSpan s, double conf) : span(s), confidence(conf) {
  if (!(conf >= 0.0 && conf <= 1.0))
    throw Error(ErrorCode::ValidationError,
                "confidence must be in [0,1], got " + std::to_string(conf));
}

double span_iou(const TemporalSpan& a, const TemporalSpan& b) {
  double inter = std::max(0.0, std::min(a.end, b.end) - std::max(a.start, b.start));
  double uni = a.length() + b.length() - inter;
  return inter / uni;
}

double span_giou(const TemporalSpan& a, const TemporalSpan& b) {
  double inter = std::max(0.0, std::min(a.end, b.end) - std::max(a.start, b.start));
  double uni = a.length() + b.length() - inter;
  double hull = std::max(a.end, b.end) - std::min(a.start, b.start);
  return inter / uni - (hull - uni) / hull;
}

TemporalSpan span_from_center_width(double center, double width, double duration) {
  if (!(duration > 0.0))
    throw Error(ErrorCode::ValidationError, "duration must be positive");
  if (!(width > 0.0))
    throw Error(ErrorCode::ValidationError, "width must be positive, got " + std::to_string(width));
  double s = (center - width / 2.0) * duration;
  double e = (center + width / 2.0) * duration;
  s = std::clamp(s, 0.0, duration);
  e = std::clamp(e, 0.0, duration);
  return TemporalSpan(s, e);
}

void span_to_center_width(const TemporalSpan& span, double duration, double& center,
                          double& width) {
  if (!(duration > 0.0))
    throw Error(ErrorCode::ValidationError, "duration must be positive");
  center = (span.start + span.end) / 2.0 / duration;
  width = span.length() / duration;
}

std::vector<int> clip_ids_for_span(const TemporalSpan& span, const ClipGrid& grid) {
  std::vector<int> ids;
  int first = std::max(0, (int)std::floor(span.start / grid.clip_len));
  for (int i = first; i < grid.num_clips; ++i) {
    double cs = i * grid.clip_len;
    double ce = std::min((i + 1) * grid.clip_len, grid.duration);
    if (cs >= span.end) break;
    if (std::min(span.end, ce) - std::max(span.start, cs) > 0.0) ids.push_back(i);
  }
  return ids;
}

}  // namespace trajmoment
