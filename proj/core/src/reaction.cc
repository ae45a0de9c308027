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

#include "dashcam/reaction.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dashcam/error.h"

namespace dashcam::reaction {

void SpeedConfig::Validate() const {
  if (chunksize < 2) throw ConfigError("chunksize must be >= 2");
  peak.Validate();
}

MotionProfile ComputeMotionProfile(const Track& track, const SpeedConfig& cfg) {
  MotionProfile profile;
  const auto& obs = track.observations;
  const std::size_t chunk = static_cast<std::size_t>(cfg.chunksize);
  if (obs.size() < chunk + 2) return profile;

  const Point origin = obs.front().box.center();
  std::vector<signal::XY> displacement;
  displacement.reserve(obs.size());
  for (const Observation& o : obs) {
    const Point c = o.box.center();
    displacement.push_back({double(o.frame - obs.front().frame),
                            std::hypot(c.x - origin.x, c.y - origin.y)});
  }

  std::vector<signal::XY> velocity_points;
  velocity_points.reserve(obs.size());
  for (std::size_t f = 1; f < obs.size(); ++f) {
    std::size_t begin = 0;
    if (cfg.velocity == VelocityMode::kSlidingWindow && f + 1 > chunk) {
      begin = f + 1 - chunk;
    }
    const double v = signal::FitSlope(
        std::span(displacement).subspan(begin, f + 1 - begin));
    profile.velocity.push_back({obs[f].frame, v});
    velocity_points.push_back({double(obs[f].frame), v});
  }

  // velocity_points[k] is observation k+1, so observation f maps to f-1.
  for (std::size_t f = chunk; f < obs.size(); ++f) {
    const double a = signal::FitSlope(
        std::span(velocity_points).subspan(f - chunk, chunk));
    profile.acceleration.push_back({obs[f].frame, std::abs(a)});
  }
  return profile;
}

std::optional<int> SpeedAnomaly(const Track& track, const SpeedConfig& cfg) {
  const MotionProfile profile = ComputeMotionProfile(track, cfg);
  if (profile.acceleration.empty()) return std::nullopt;
  auto peak = signal::DetectPeak(profile.acceleration, cfg.peak);
  if (!peak) return std::nullopt;
  return peak->index;
}

std::optional<int> VideoSpeedAnomaly(const VideoAnnotations& video,
                                     const SpeedConfig& cfg) {
  std::optional<int> earliest;
  for (const auto& [id, track] : video.tracks) {
    auto frame = SpeedAnomaly(track, cfg);
    if (frame && (!earliest || *frame < *earliest)) earliest = frame;
  }
  return earliest;
}

void SoundConfig::Validate() const {
  if (envelope_ms < 1) throw ConfigError("envelope_ms must be >= 1");
  peak.Validate();
}

std::vector<double> RmsEnvelope(const AudioTrack& audio, int envelope_ms) {
  std::vector<double> envelope;
  const long long width =
      static_cast<long long>(audio.sample_rate) * envelope_ms / 1000;
  if (width < 1) return envelope;
  const std::size_t n = audio.samples.size() / static_cast<std::size_t>(width);
  envelope.reserve(n);
  for (std::size_t w = 0; w < n; ++w) {
    double energy = 0.0;
    const float* p = audio.samples.data() + w * width;
    for (long long i = 0; i < width; ++i) energy += double(p[i]) * p[i];
    envelope.push_back(std::sqrt(energy / double(width)));
  }
  return envelope;
}

std::optional<int> SoundAnomaly(const AudioTrack& audio, const Rational& fps,
                                const SoundConfig& cfg) {
  std::vector<double> envelope = RmsEnvelope(audio, cfg.envelope_ms);
  if (envelope.size() < 2) return std::nullopt;

  std::vector<double> sorted = envelope;
  const std::size_t mid = sorted.size() / 2;
  std::nth_element(sorted.begin(), sorted.begin() + mid, sorted.end());
  double median = sorted[mid];
  if (sorted.size() % 2 == 0) {
    median = (median + *std::max_element(sorted.begin(), sorted.begin() + mid)) / 2;
  }
  median = std::max(median, 1e-9);

  signal::Series normalized;
  normalized.reserve(envelope.size());
  for (std::size_t i = 0; i < envelope.size(); ++i) {
    normalized.push_back({static_cast<int>(i), envelope[i] / median});
  }
  auto peak = signal::DetectPeak(normalized, cfg.peak);
  if (!peak) return std::nullopt;
  // frame = floor(index * envelope_ms / 1000 * fps), in exact integers.
  const long long numerator =
      static_cast<long long>(peak->index) * cfg.envelope_ms * fps.num;
  const long long denominator = 1000LL * fps.den;
  return static_cast<int>(numerator / denominator);
}

const char* ReactionSourceName(ReactionSource source) {
  switch (source) {
    case ReactionSource::kSpeed:
      return "speed";
    case ReactionSource::kSound:
      return "sound";
    case ReactionSource::kFused:
      return "fused";
    case ReactionSource::kNone:
      return "none";
  }
  return "none";
}

ReactionVerdict FuseReactions(std::optional<int> speed,
                              std::optional<int> sound, std::string video_id) {
  ReactionVerdict verdict;
  verdict.video_id = std::move(video_id);
  if (speed && sound) {
    verdict.frame = std::min(*speed, *sound);
    verdict.source = ReactionSource::kFused;
  } else if (speed) {
    verdict.frame = speed;
    verdict.source = ReactionSource::kSpeed;
  } else if (sound) {
    verdict.frame = sound;
    verdict.source = ReactionSource::kSound;
  }
  return verdict;
}

std::vector<bool> VerdictToFrames(const ReactionVerdict& verdict,
                                  int frame_count) {
  if (frame_count <= 0) throw std::invalid_argument("frame_count must be positive");
  std::vector<bool> frames(static_cast<std::size_t>(frame_count), false);
  if (verdict.frame) {
    for (int f = std::max(*verdict.frame, 0); f < frame_count; ++f) frames[f] = true;
  }
  return frames;
}

}  // namespace dashcam::reaction
