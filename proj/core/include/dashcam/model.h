//
// Copyright 2026 The dashcam-hazard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DASHCAM_MODEL_H_
#define DASHCAM_MODEL_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dashcam {

using TrackId = std::int64_t;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Axis-aligned box in pixel coordinates, origin top-left.
struct BBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() * height(); }
  Point center() const { return {(x1 + x2) / 2.0, (y1 + y2) / 2.0}; }
  bool valid() const { return x2 > x1 && y2 > y1; }

  friend bool operator==(const BBox&, const BBox&) = default;
};

enum class TrackKind { kChallengeObject, kTrafficScene };

const char* TrackKindName(TrackKind kind);
std::optional<TrackKind> ParseTrackKind(const std::string& name);

struct Observation {
  int frame = 0;
  BBox box;

  friend bool operator==(const Observation&, const Observation&) = default;
};

// One object's boxes within one video. Observations are strictly increasing
// in frame and never empty once produced by the parser.
struct Track {
  std::string video_id;
  TrackId track_id = 0;
  TrackKind kind = TrackKind::kChallengeObject;
  std::vector<Observation> observations;

  int first_frame() const { return observations.front().frame; }
  const Observation* at_frame(int frame) const;

  friend bool operator==(const Track&, const Track&) = default;
};

struct Rational {
  std::int64_t num = 1;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / den; }
  std::string ToString() const;
  friend bool operator==(const Rational&, const Rational&) = default;
};

struct VideoAnnotations {
  std::string video_id;
  int frame_count = 0;
  int frame_width = 0;
  int frame_height = 0;
  Rational fps;
  std::map<TrackId, Track> tracks;

  friend bool operator==(const VideoAnnotations&,
                         const VideoAnnotations&) = default;
};

struct CaptionCandidate {
  std::string video_id;
  TrackId track_id = 0;
  int frame = 0;
  std::string model_id;
  std::string text;

  friend bool operator==(const CaptionCandidate&,
                         const CaptionCandidate&) = default;
};

struct LabelCandidate {
  std::string video_id;
  TrackId track_id = 0;
  std::string label;
  double confidence = 0.0;
};

struct FrameTruth {
  std::vector<TrackId> hazard_track_ids;
  std::vector<std::string> hazard_captions;
};

struct VideoTruth {
  std::optional<int> reaction_frame;
  // Optional in the file; when absent the scorer takes the frame count from
  // the predictions.
  std::optional<int> frame_count;
  std::map<int, FrameTruth> frames;
};

using GroundTruth = std::map<std::string, VideoTruth>;

struct HazardPrediction {
  TrackId track_id = 0;
  std::string caption;

  friend bool operator==(const HazardPrediction&,
                         const HazardPrediction&) = default;
};

struct FramePrediction {
  bool state_changed = false;
  std::vector<HazardPrediction> hazards;

  friend bool operator==(const FramePrediction&,
                         const FramePrediction&) = default;
};

// video_id -> one entry per frame, indexed by frame number.
using Predictions = std::map<std::string, std::vector<FramePrediction>>;

}  // namespace dashcam

#endif  // DASHCAM_MODEL_H_
