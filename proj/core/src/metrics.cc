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

#include "dashcam/metrics.h"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "dashcam/error.h"
#include "dashcam/text.h"

namespace dashcam::metrics {
namespace {

TaskScores WithOverall(double reaction, double hazard, double caption) {
  return {reaction, hazard, caption, (reaction + hazard + caption) / 3.0};
}

nlohmann::json ToJson(const TaskScores& s) {
  return {{"reaction", s.reaction},
          {"hazard", s.hazard},
          {"caption", s.caption},
          {"overall", s.overall}};
}

}  // namespace

double ScoreReaction(const std::vector<bool>& predicted,
                     const std::vector<bool>& truth) {
  if (predicted.size() != truth.size()) {
    throw std::invalid_argument("reaction score: predicted has " +
                                std::to_string(predicted.size()) +
                                " frames, truth has " +
                                std::to_string(truth.size()));
  }
  if (truth.empty()) throw std::invalid_argument("reaction score: no frames");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i] == truth[i]) ++correct;
  }
  return double(correct) / double(truth.size());
}

double ScoreHazardFrame(const std::set<TrackId>& predicted,
                        const std::set<TrackId>& known) {
  if (predicted.empty() && known.empty()) return 1.0;
  std::size_t correct = 0;
  for (TrackId id : predicted) correct += known.count(id);
  return double(correct) / double(std::max(predicted.size(), known.size()));
}

double ScoreCaptionFrame(std::span<const std::string> predicted,
                         std::span<const std::string> known, int char_limit) {
  if (predicted.empty() && known.empty()) return 1.0;
  std::vector<std::string> folded;
  folded.reserve(known.size());
  for (const std::string& k : known) folded.push_back(ToLower(k));
  std::vector<bool> used(known.size(), false);

  std::size_t correct = 0;
  for (const std::string& p : predicted) {
    if (Trim(p).empty()) continue;
    const std::string prefix =
        ToLower(Utf8Prefix(p, static_cast<std::size_t>(std::max(char_limit, 0))));
    for (std::size_t i = 0; i < folded.size(); ++i) {
      if (!used[i] && folded[i].find(prefix) != std::string::npos) {
        used[i] = true;
        ++correct;
        break;
      }
    }
  }
  return double(correct) / double(std::max(predicted.size(), known.size()));
}

RunScores ScoreRun(const Predictions& predictions, const GroundTruth& truth,
                   int char_limit) {
  std::string missing;
  for (const auto& [video_id, vt] : truth) {
    if (!predictions.count(video_id)) missing += (missing.empty() ? "" : ", ") + video_id;
  }
  if (!missing.empty()) throw InputError("videos missing from predictions: " + missing);

  RunScores run;
  double reaction_sum = 0.0;
  double hazard_sum = 0.0;
  double caption_sum = 0.0;
  for (const auto& [video_id, vt] : truth) {
    const auto& frames = predictions.at(video_id);
    const int n = static_cast<int>(frames.size());
    if (vt.frame_count && *vt.frame_count != n) {
      throw InputError("video " + video_id + ": truth has " +
                       std::to_string(*vt.frame_count) +
                       " frames, predictions have " + std::to_string(n));
    }
    if (n == 0) throw InputError("video " + video_id + " has no predicted frames");

    std::vector<bool> predicted_state(frames.size());
    std::vector<bool> true_state(frames.size());
    double hazard = 0.0;
    double caption = 0.0;
    static const FrameTruth kEmpty;
    for (int f = 0; f < n; ++f) {
      const FramePrediction& p = frames[std::size_t(f)];
      auto it = vt.frames.find(f);
      const FrameTruth& ft = it == vt.frames.end() ? kEmpty : it->second;
      predicted_state[std::size_t(f)] = p.state_changed;
      true_state[std::size_t(f)] = vt.reaction_frame && f >= *vt.reaction_frame;

      std::set<TrackId> ids;
      std::vector<std::string> captions;
      for (const HazardPrediction& h : p.hazards) {
        ids.insert(h.track_id);
        captions.push_back(h.caption);
      }
      hazard += ScoreHazardFrame(
          ids, {ft.hazard_track_ids.begin(), ft.hazard_track_ids.end()});
      caption += ScoreCaptionFrame(captions, ft.hazard_captions, char_limit);
    }
    VideoScores vs;
    vs.video_id = video_id;
    vs.frame_count = n;
    vs.scores = WithOverall(ScoreReaction(predicted_state, true_state),
                            hazard / n, caption / n);
    reaction_sum += vs.scores.reaction;
    hazard_sum += vs.scores.hazard;
    caption_sum += vs.scores.caption;
    run.per_video.push_back(std::move(vs));
  }
  if (!run.per_video.empty()) {
    const double videos = double(run.per_video.size());
    run.aggregate = WithOverall(reaction_sum / videos, hazard_sum / videos,
                                caption_sum / videos);
  }
  return run;
}

std::string ScoreReportJson(const RunScores& scores) {
  nlohmann::json videos = nlohmann::json::object();
  for (const VideoScores& v : scores.per_video) {
    nlohmann::json entry = ToJson(v.scores);
    entry["frame_count"] = v.frame_count;
    videos[v.video_id] = std::move(entry);
  }
  nlohmann::json doc = {{"aggregate", ToJson(scores.aggregate)},
                        {"videos", std::move(videos)}};
  return doc.dump(2);
}

}  // namespace dashcam::metrics
