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

#ifndef DASHCAM_AUDIO_H_
#define DASHCAM_AUDIO_H_

#include <filesystem>
#include <istream>
#include <ostream>
#include <vector>

namespace dashcam {

// Mono samples in [-1, 1].
struct AudioTrack {
  std::vector<float> samples;
  int sample_rate = 0;

  double duration_seconds() const {
    return sample_rate > 0 ? double(samples.size()) / sample_rate : 0.0;
  }
};

// RIFF/WAVE reader for 16-bit PCM and 32-bit IEEE float, mono or stereo
// (any channel count is averaged down to mono). WAVE_FORMAT_EXTENSIBLE is
// accepted when its sub-format is one of the two. Throws InputError.
AudioTrack ReadWav(std::istream& in);
AudioTrack ReadWavFile(const std::filesystem::path& path);

// Writes mono 16-bit PCM; samples are clipped to [-1, 1].
void WriteWav16(const AudioTrack& audio, std::ostream& out);

}  // namespace dashcam

#endif  // DASHCAM_AUDIO_H_
