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

#ifndef DASHCAM_REACTION_H_
#define DASHCAM_REACTION_H_

#include <optional>
#include <string>
#include <vector>

#include "dashcam/audio.h"
#include "dashcam/model.h"
#include "dashcam/signal.h"

// Driver-reaction detection: speed anomalies from track kinematics, sound
// anomalies from the audio energy envelope, and their fusion.
namespace dashcam::reaction {

enum class VelocityMode {
  // Slope over the last `chunksize` displacement samples.
  kSlidingWindow,
  // Slope over every displacement sample since the first observation.
  kPrefix,
};

struct SpeedConfig {
  int chunksize = 10;
  signal::PeakConfig peak;
  VelocityMode velocity = VelocityMode::kSlidingWindow;

  void Validate() const;
};

// Per-track kinematics. velocity[k] belongs to observation k+1;
// acceleration[k] to observation k+chunksize. Sample::index is the frame.
struct MotionProfile {
  signal::Series velocity;
  signal::Series acceleration;
};

// Velocity is the regression slope of centroid displacement from the first
// observation against elapsed frames; acceleration the slope of velocity
// against frame over `chunksize` samples, taken in magnitude. Tracks with
// fewer than chunksize + 2 observations yield empty series.
MotionProfile ComputeMotionProfile(const Track& track, const SpeedConfig& cfg);

// Frame of the first acceleration peak, or nullopt.
std::optional<int> SpeedAnomaly(const Track& track, const SpeedConfig& cfg);

// Earliest SpeedAnomaly over every track of the video, both kinds pooled.
std::optional<int> VideoSpeedAnomaly(const VideoAnnotations& video,
                                     const SpeedConfig& cfg);

// Envelope statistics need a full window before firing: on a stationary
// noise floor a 3-sigma rule over a handful of samples fires in roughly a
// third of 8 s clips.
struct SoundConfig {
  signal::PeakConfig peak{30, 6.0, 30};
  int envelope_ms = 50;

  void Validate() const;
};

// RMS over consecutive non-overlapping windows of envelope_ms; a trailing
// partial window is discarded.
std::vector<double> RmsEnvelope(const AudioTrack& audio, int envelope_ms);

std::optional<int> SoundAnomaly(const AudioTrack& audio, const Rational& fps,
                                const SoundConfig& cfg);

enum class ReactionSource { kSpeed, kSound, kFused, kNone };

const char* ReactionSourceName(ReactionSource source);

struct ReactionVerdict {
  std::string video_id;
  std::optional<int> frame;  // present iff source != kNone
  ReactionSource source = ReactionSource::kNone;

  friend bool operator==(const ReactionVerdict&,
                         const ReactionVerdict&) = default;
};

// Earliest detection wins; both present yields kFused.
ReactionVerdict FuseReactions(std::optional<int> speed,
                              std::optional<int> sound,
                              std::string video_id = {});

// false before the reaction frame, true from it onwards; all false when no
// reaction was detected.
std::vector<bool> VerdictToFrames(const ReactionVerdict& verdict,
                                  int frame_count);

}  // namespace dashcam::reaction

#endif  // DASHCAM_REACTION_H_
