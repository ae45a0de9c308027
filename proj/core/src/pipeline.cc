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

#include "dashcam/pipeline.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <thread>

#include <nlohmann/json.hpp>

#include "dashcam/error.h"

namespace dashcam::pipeline {

const char* ReactionModeName(ReactionMode mode) {
  switch (mode) {
    case ReactionMode::kSpeed:
      return "speed";
    case ReactionMode::kSound:
      return "sound";
    case ReactionMode::kSpeedPlusSound:
      return "both";
  }
  return "both";
}

const char* CaptionModeName(caption::CaptionMode mode) {
  return mode == caption::CaptionMode::kAreaVote ? "alg2" : "word35";
}

void PipelineConfig::Validate() const {
  speed.Validate();
  sound.Validate();
  ensemble.Validate();
  words.Validate();
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (submission.hazard_slots < 1) throw ConfigError("hazard slot count must be >= 1");
  if (ensemble.top_k > submission.hazard_slots) {
    throw ConfigError("top_k (" + std::to_string(ensemble.top_k) +
                      ") exceeds the submission's hazard slots (" +
                      std::to_string(submission.hazard_slots) + ")");
  }
}

CandidateIndex::CandidateIndex(const std::vector<CaptionCandidate>& captions,
                               const std::vector<LabelCandidate>& labels) {
  for (const CaptionCandidate& c : captions) {
    captions_[{c.video_id, c.track_id}].push_back(c);
  }
  for (const LabelCandidate& l : labels) labels_[l.video_id].push_back(l);
}

std::span<const CaptionCandidate> CandidateIndex::captions(
    const std::string& video_id, TrackId track_id) const {
  auto it = captions_.find({video_id, track_id});
  if (it == captions_.end()) return {};
  return it->second;
}

std::span<const LabelCandidate> CandidateIndex::labels(
    const std::string& video_id) const {
  auto it = labels_.find(video_id);
  if (it == labels_.end()) return {};
  return it->second;
}

VideoResult ProcessVideo(const VideoAnnotations& video,
                         const CandidateIndex& index, const AudioSource& audio,
                         const PipelineConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  VideoResult result;
  result.video_id = video.video_id;

  // Driver reaction.
  const bool want_sound = cfg.reaction_mode != ReactionMode::kSpeed;
  bool use_speed = cfg.reaction_mode != ReactionMode::kSound;
  std::optional<AudioTrack> track_audio;
  if (want_sound && audio) track_audio = audio(video.video_id);
  if (want_sound && !track_audio) {
    result.warnings.push_back("no audio; speed-only fallback");
    use_speed = true;
  }
  if (use_speed) result.speed_frame = reaction::VideoSpeedAnomaly(video, cfg.speed);
  if (track_audio) {
    result.sound_frame = reaction::SoundAnomaly(*track_audio, video.fps, cfg.sound);
    if (result.sound_frame && *result.sound_frame >= video.frame_count) {
      result.warnings.push_back("sound peak past the last frame ignored");
      result.sound_frame.reset();
    }
  }
  result.verdict = reaction::FuseReactions(result.speed_frame,
                                           result.sound_frame, video.video_id);
  const std::vector<bool> changed =
      reaction::VerdictToFrames(result.verdict, video.frame_count);

  // Hazard selection.
  result.weak_scores = hazard::ComputeWeakScores(
      video, index.labels(video.video_id), result.verdict, cfg.ensemble);
  result.ballot = hazard::Vote(result.weak_scores, cfg.ensemble);
  if (result.weak_scores.empty()) {
    result.warnings.push_back("no challenge-object tracks; no hazards predicted");
  }

  // Captions for the winners.
  for (TrackId id : result.ballot.winners) {
    const Track& track = video.tracks.at(id);
    const caption::AreaByFrame areas = caption::AreasOf(track);
    std::vector<CaptionCandidate> usable;
    for (const CaptionCandidate& c : index.captions(video.video_id, id)) {
      if (areas.count(c.frame)) {
        usable.push_back(c);
      } else {
        result.warnings.push_back("caption for track " + std::to_string(id) +
                                  " at frame " + std::to_string(c.frame) +
                                  " has no observation; skipped");
      }
    }
    if (usable.empty()) {
      result.warnings.push_back("no caption candidates for track " +
                                std::to_string(id));
    }
    result.captions[id] =
        caption::CaptionTrack(usable, areas, cfg.caption_mode, cfg.words);
  }

  // Broadcast to every frame where a winner is visible.
  result.frames.resize(static_cast<std::size_t>(video.frame_count));
  for (int f = 0; f < video.frame_count; ++f) {
    FramePrediction& p = result.frames[static_cast<std::size_t>(f)];
    p.state_changed = changed[static_cast<std::size_t>(f)];
    for (TrackId id : result.ballot.winners) {
      if (video.tracks.at(id).at_frame(f) != nullptr) {
        p.hazards.push_back({id, result.captions.at(id)});
      }
    }
  }

  result.elapsed_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  return result;
}

RunResult RunPipeline(const PipelineInputs& inputs, const PipelineConfig& cfg) {
  cfg.Validate();
  const CandidateIndex index(inputs.captions, inputs.labels);

  std::vector<const VideoAnnotations*> order;
  for (const VideoAnnotations& v : inputs.videos) order.push_back(&v);
  std::sort(order.begin(), order.end(),
            [](const auto* a, const auto* b) { return a->video_id < b->video_id; });

  RunResult run;
  run.videos.resize(order.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < order.size(); i = next++) {
      try {
        run.videos[i] = ProcessVideo(*order[i], index, inputs.audio, cfg);
      } catch (const std::exception& e) {
        run.videos[i].video_id = order[i]->video_id;
        run.videos[i].ok = false;
        run.videos[i].error = e.what();
      }
    }
  };
  const int threads =
      std::max(1, std::min<int>(cfg.workers, static_cast<int>(order.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (const VideoResult& v : run.videos) {
    if (v.ok) {
      run.predictions[v.video_id] = v.frames;
    } else {
      run.ok = false;
    }
  }
  return run;
}

std::string RunReportJson(const RunResult& result, bool include_timing) {
  using nlohmann::json;
  json videos = json::object();
  std::size_t warnings = 0;
  for (const VideoResult& v : result.videos) {
    json entry;
    entry["status"] = v.ok ? "ok" : "error";
    if (!v.ok) entry["error"] = v.error;
    auto optional_frame = [](const std::optional<int>& f) {
      return f ? json(*f) : json();
    };
    entry["reaction"] = {{"frame", optional_frame(v.verdict.frame)},
                         {"source", reaction::ReactionSourceName(v.verdict.source)},
                         {"speed_frame", optional_frame(v.speed_frame)},
                         {"sound_frame", optional_frame(v.sound_frame)}};
    json tracks = json::object();
    for (const auto& [id, scores] : v.weak_scores) {
      tracks[std::to_string(id)] = {
          {"weak_scores", scores},
          {"base_combined", v.ballot.base_combined.at(id)},
          {"votes", v.ballot.votes.at(id)}};
    }
    entry["ballot"] = {{"winners", v.ballot.winners}, {"tracks", std::move(tracks)}};
    json captions = json::object();
    for (const auto& [id, text] : v.captions) captions[std::to_string(id)] = text;
    entry["captions"] = std::move(captions);
    entry["warnings"] = v.warnings;
    warnings += v.warnings.size();
    if (include_timing) entry["elapsed_ms"] = v.elapsed_ms;
    videos[v.video_id] = std::move(entry);
  }
  json doc = {{"status", result.ok ? "ok" : "partial_failure"},
              {"video_count", result.videos.size()},
              {"warning_count", warnings},
              {"videos", std::move(videos)}};
  return doc.dump(2);
}

}  // namespace dashcam::pipeline
