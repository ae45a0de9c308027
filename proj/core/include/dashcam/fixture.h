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

#ifndef DASHCAM_FIXTURE_H_
#define DASHCAM_FIXTURE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dashcam/audio.h"
#include "dashcam/model.h"
#include "dashcam/pipeline.h"

// Synthetic dashcam scenes with one injected hazard each, for closed-loop
// testing. Every byte produced is a function of the seed.
namespace dashcam::fixture {

struct FixtureOptions {
  int width = 1280;
  int height = 720;
  int fps = 30;
  int sample_rate = 16000;
  // Observations the hazard needs before it starts moving: a velocity
  // window plus the detector warmup plus slack.
  int min_lead_frames = 23;
  double audio_noise = 0.05;      // uniform noise amplitude
  double burst_amplitude = 0.9;
  int burst_ms = 200;
  int caption_stride = 3;
};

struct FixtureVideo {
  VideoAnnotations annotations;
  AudioTrack audio;
  std::vector<CaptionCandidate> captions;
  std::vector<LabelCandidate> labels;
  VideoTruth truth;
  TrackId hazard_track = 0;
  int reaction_frame = 0;
  std::string hazard_caption;
};

std::string VideoIdForSeed(std::uint64_t seed);

FixtureVideo GenerateVideo(std::uint64_t seed, const FixtureOptions& options = {});

// Video k is GenerateVideo(first_seed + k).
std::vector<FixtureVideo> GenerateFixture(std::uint64_t first_seed, int n_videos,
                                          const FixtureOptions& options = {});

pipeline::PipelineInputs ToInputs(const std::vector<FixtureVideo>& videos);
GroundTruth TruthOf(const std::vector<FixtureVideo>& videos);

// Writes tracks.jsonl, captions.jsonl, labels.jsonl, truth.json and
// audio/<video_id>.wav under dir.
void WriteFixture(const std::vector<FixtureVideo>& videos,
                  const std::filesystem::path& dir);

}  // namespace dashcam::fixture

#endif  // DASHCAM_FIXTURE_H_
