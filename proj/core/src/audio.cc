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

#include "dashcam/audio.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "dashcam/error.h"

namespace dashcam {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t Le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t Le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void PutLe16(std::ostream& out, std::uint16_t v) {
  const char b[2] = {static_cast<char>(v & 0xFF), static_cast<char>(v >> 8)};
  out.write(b, 2);
}

void PutLe32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xFF),
                     static_cast<char>((v >> 8) & 0xFF),
                     static_cast<char>((v >> 16) & 0xFF),
                     static_cast<char>((v >> 24) & 0xFF)};
  out.write(b, 4);
}

}  // namespace

AudioTrack ReadWav(std::istream& in) {
  std::string bytes{std::istreambuf_iterator<char>(in),
                    std::istreambuf_iterator<char>()};
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t size = bytes.size();
  if (size < 12 || std::memcmp(data, "RIFF", 4) != 0 ||
      std::memcmp(data + 8, "WAVE", 4) != 0) {
    throw InputError("not a RIFF/WAVE file");
  }

  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
  bool have_fmt = false;
  const unsigned char* pcm = nullptr;
  std::size_t pcm_bytes = 0;

  std::size_t pos = 12;
  while (pos + 8 <= size) {
    const unsigned char* chunk = data + pos;
    std::size_t chunk_size = Le32(chunk + 4);
    const std::size_t body = pos + 8;
    // Streaming writers leave 0xFFFFFFFF in the data size.
    chunk_size = std::min(chunk_size, size - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw InputError("fmt chunk too short");
      format = Le16(data + body);
      channels = Le16(data + body + 2);
      sample_rate = Le32(data + body + 4);
      bits = Le16(data + body + 14);
      if (format == kFormatExtensible) {
        if (chunk_size < 40) throw InputError("extensible fmt chunk too short");
        format = Le16(data + body + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      pcm = data + body;
      pcm_bytes = chunk_size;
    }
    pos = body + chunk_size + (chunk_size & 1);
  }

  if (!have_fmt) throw InputError("missing fmt chunk");
  if (pcm == nullptr) throw InputError("missing data chunk");
  if (channels == 0) throw InputError("zero channels");
  if (sample_rate == 0) throw InputError("zero sample rate");

  std::size_t bytes_per_sample = 0;
  if (format == kFormatPcm && bits == 16) {
    bytes_per_sample = 2;
  } else if (format == kFormatFloat && bits == 32) {
    bytes_per_sample = 4;
  } else {
    throw InputError("unsupported WAV encoding (format " +
                     std::to_string(format) + ", " + std::to_string(bits) +
                     " bits); need 16-bit PCM or 32-bit float");
  }

  const std::size_t frame_bytes = bytes_per_sample * channels;
  const std::size_t frames = pcm_bytes / frame_bytes;
  AudioTrack audio;
  audio.sample_rate = static_cast<int>(sample_rate);
  audio.samples.resize(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    const unsigned char* p = pcm + f * frame_bytes;
    double sum = 0.0;
    for (std::size_t c = 0; c < channels; ++c, p += bytes_per_sample) {
      if (bytes_per_sample == 2) {
        sum += static_cast<std::int16_t>(Le16(p)) / 32768.0;
      } else {
        std::uint32_t raw = Le32(p);
        float v;
        std::memcpy(&v, &raw, sizeof v);
        sum += v;
      }
    }
    audio.samples[f] = static_cast<float>(sum / channels);
  }
  return audio;
}

AudioTrack ReadWavFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return ReadWav(in);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void WriteWav16(const AudioTrack& audio, std::ostream& out) {
  const auto data_bytes = static_cast<std::uint32_t>(audio.samples.size() * 2);
  out.write("RIFF", 4);
  PutLe32(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  PutLe32(out, 16);
  PutLe16(out, kFormatPcm);
  PutLe16(out, 1);
  PutLe32(out, static_cast<std::uint32_t>(audio.sample_rate));
  PutLe32(out, static_cast<std::uint32_t>(audio.sample_rate) * 2);
  PutLe16(out, 2);
  PutLe16(out, 16);
  out.write("data", 4);
  PutLe32(out, data_bytes);
  for (float s : audio.samples) {
    const double clipped = std::clamp(static_cast<double>(s), -1.0, 1.0);
    const auto v = static_cast<std::int16_t>(
        std::lround(std::clamp(clipped * 32768.0, -32768.0, 32767.0)));
    PutLe16(out, static_cast<std::uint16_t>(v));
  }
}

}  // namespace dashcam
