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

#ifndef DASHCAM_PIPELINE_H_
#define DASHCAM_PIPELINE_H_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dashcam/audio.h"
#include "dashcam/caption.h"
#include "dashcam/hazard.h"
#include "dashcam/io.h"
#include "dashcam/model.h"
#include "dashcam/reaction.h"

namespace dashcam::pipeline {

enum class ReactionMode { kSpeed, kSound, kSpeedPlusSound };

const char* ReactionModeName(ReactionMode mode);
const char* CaptionModeName(caption::CaptionMode mode);

struct PipelineConfig {
  reaction::SpeedConfig speed;
  reaction::SoundConfig sound;
  hazard::EnsembleConfig ensemble;
  caption::WordConfig words;
  caption::CaptionMode caption_mode = caption::CaptionMode::kAreaVote;
  ReactionMode reaction_mode = ReactionMode::kSpeedPlusSound;
  int workers = 1;
  SubmissionOptions submission;

  // Throws ConfigError.
  void Validate() const;
};

// Returns nullopt when the video has no audio. May throw InputError for an
// unreadable file. Called concurrently from worker threads.
using AudioSource =
    std::function<std::optional<AudioTrack>(const std::string& video_id)>;

struct PipelineInputs {
  std::vector<VideoAnnotations> videos;
  AudioSource audio;  // empty: no audio for any video
  std::vector<CaptionCandidate> captions;
  std::vector<LabelCandidate> labels;
};

struct VideoResult {
  std::string video_id;
  bool ok = true;
  std::string error;
  std::optional<int> speed_frame;
  std::optional<int> sound_frame;
  reaction::ReactionVerdict verdict;
  hazard::WeakScores weak_scores;
  hazard::HazardBallot ballot;
  std::map<TrackId, std::string> captions;  // per winner
  std::vector<FramePrediction> frames;
  std::vector<std::string> warnings;
  double elapsed_ms = 0.0;
};

struct RunResult {
  std::vector<VideoResult> videos;  // sorted by video_id
  Predictions predictions;          // successful videos only
  bool ok = true;
};

// Candidate and label lookups shared by every video of a run.
class CandidateIndex {
 public:
  CandidateIndex(const std::vector<CaptionCandidate>& captions,
                 const std::vector<LabelCandidate>& labels);

  std::span<const CaptionCandidate> captions(const std::string& video_id,
                                             TrackId track_id) const;
  std::span<const LabelCandidate> labels(const std::string& video_id) const;

 private:
  std::map<std::pair<std::string, TrackId>, std::vector<CaptionCandidate>> captions_;
  std::map<std::string, std::vector<LabelCandidate>> labels_;
};

// Runs reaction detection, hazard voting and captioning for one video.
// Throws InputError for unreadable audio.
VideoResult ProcessVideo(const VideoAnnotations& video,
                         const CandidateIndex& index, const AudioSource& audio,
                         const PipelineConfig& cfg);

// Processes every video on a pool of cfg.workers threads. Per-video errors
// are captured in the result instead of thrown.
RunResult RunPipeline(const PipelineInputs& inputs, const PipelineConfig& cfg);

// Per-video verdicts, ballots, captions, warnings and status.
std::string RunReportJson(const RunResult& result, bool include_timing = true);

}  // namespace dashcam::pipeline

#endif  // DASHCAM_PIPELINE_H_
