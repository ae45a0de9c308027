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

#ifndef DASHCAM_METRICS_H_
#define DASHCAM_METRICS_H_

#include <set>
#include <span>
#include <string>
#include <vector>

#include "dashcam/model.h"

// Challenge scoring: per-frame reaction accuracy, hazard-id overlap and
// caption-prefix presence, macro-averaged over videos.
namespace dashcam::metrics {

struct TaskScores {
  double reaction = 0.0;
  double hazard = 0.0;
  double caption = 0.0;
  // Unweighted mean of the three.
  double overall = 0.0;
};

// Fraction of frames where predicted == truth. Throws std::invalid_argument
// on a length mismatch or empty input.
double ScoreReaction(const std::vector<bool>& predicted,
                     const std::vector<bool>& truth);

// |predicted ∩ known| / max(|known|, |predicted|); 1 when both are empty.
double ScoreHazardFrame(const std::set<TrackId>& predicted,
                        const std::set<TrackId>& known);

// A prediction is correct when its first char_limit characters, case-folded,
// occur inside a not-yet-matched known caption (greedy, prediction order).
// Blank predictions are never correct. Score is
// correct / max(|known|, |predicted|); 1 when both are empty.
double ScoreCaptionFrame(std::span<const std::string> predicted,
                         std::span<const std::string> known,
                         int char_limit = 35);

struct VideoScores {
  std::string video_id;
  int frame_count = 0;
  TaskScores scores;
};

struct RunScores {
  TaskScores aggregate;
  std::vector<VideoScores> per_video;  // truth order (lexicographic)
};

// Throws InputError naming every truth video absent from the predictions,
// or a video whose frame counts disagree.
RunScores ScoreRun(const Predictions& predictions, const GroundTruth& truth,
                   int char_limit = 35);

// {"aggregate": {...}, "videos": {id: {...}}}
std::string ScoreReportJson(const RunScores& scores);

}  // namespace dashcam::metrics

#endif  // DASHCAM_METRICS_H_
