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

#include "dashcam/fixture.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numeric>
#include <random>

#include "dashcam/error.h"
#include "dashcam/io.h"

namespace dashcam::fixture {
namespace {

// Portable draws: only the engine is standard, the distributions are ours.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(Mix(seed)) {}

  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  int Int(int lo, int hi) {
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool Chance(double p) { return Uniform() < p; }
  template <typename T>
  const T& Pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(Int(0, static_cast<int>(items.size()) - 1))];
  }

 private:
  static std::uint64_t Mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }
  std::mt19937_64 engine_;
};

constexpr double kMargin = 2.0;

// Center coordinate in [lo, hi] keeping a box of `size` inside [0, extent]
// over a total displacement `disp`; lo > hi when that is impossible.
std::pair<double, double> CenterRange(double size, double extent, double disp) {
  const double lo = kMargin + size / 2 - std::min(0.0, disp);
  const double hi = extent - kMargin - size / 2 - std::max(0.0, disp);
  return {lo, hi};
}

struct Motion {
  int first = 0;
  int last = 0;
  double w = 0;
  double h = 0;
  Point start;     // center at `first`
  Point velocity;  // px/frame
  int hold = -1;   // frames up to and including `hold` are static
};

Point CenterAt(const Motion& m, int f) {
  const int moving = m.hold >= 0 ? std::max(0, f - m.hold) : f - m.first;
  return {m.start.x + m.velocity.x * moving, m.start.y + m.velocity.y * moving};
}

// Shortens the motion until it fits in frame, then places the start as close
// to `preferred` as allowed.
void Place(Motion& m, Point preferred, int width, int height) {
  for (;;) {
    const int span = m.last - std::max(m.first, m.hold);
    auto [xlo, xhi] = CenterRange(m.w, width, m.velocity.x * span);
    auto [ylo, yhi] = CenterRange(m.h, height, m.velocity.y * span);
    if (xlo <= xhi && ylo <= yhi) {
      m.start = {std::clamp(preferred.x, xlo, xhi), std::clamp(preferred.y, ylo, yhi)};
      return;
    }
    if (m.last - m.first <= 30) throw std::logic_error("fixture track cannot fit");
    m.last -= 5;
  }
}

Track MakeTrack(const std::string& video_id, TrackId id, TrackKind kind,
                const Motion& m) {
  Track t;
  t.video_id = video_id;
  t.track_id = id;
  t.kind = kind;
  for (int f = m.first; f <= m.last; ++f) {
    const Point c = CenterAt(m, f);
    t.observations.push_back(
        {f, {c.x - m.w / 2, c.y - m.h / 2, c.x + m.w / 2, c.y + m.h / 2}});
  }
  return t;
}

const std::vector<std::string> kAnimals = {"deer", "dog",   "cow",   "kangaroo",
                                           "horse", "moose", "sheep", "fox"};
const std::vector<std::string> kHazardTemplates = {
    "a {} crossing the road", "a {} running across the street",
    "a {} standing on the road", "a {} walking in front of the car"};
const std::vector<std::string> kDistractorCaptions = {
    "a blurry photo of a street", "a car driving down a road",
    "an animal standing in the grass", "a view of a highway at night",
    "a brown animal", "a road with trees on both sides"};
const std::vector<std::string> kDenylisted = {"car", "truck", "traffic light",
                                              "street sign", "bus"};
const std::vector<std::string> kHarmless = {"bicycle", "mailbox", "trash can",
                                            "bench", "fire hydrant"};
const std::vector<std::string> kModels = {"blip2-opt-6.7b", "blip2-flan-t5-xxl",
                                          "blip", "vit-gpt2"};

std::string Fill(const std::string& pattern, const std::string& word) {
  std::string out = pattern;
  out.replace(out.find("{}"), 2, word);
  return out;
}

std::string Capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

}  // namespace

std::string VideoIdForSeed(std::uint64_t seed) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "video_%06llu", static_cast<unsigned long long>(seed));
  return buf;
}

FixtureVideo GenerateVideo(std::uint64_t seed, const FixtureOptions& opt) {
  Rng rng(seed);
  FixtureVideo out;
  VideoAnnotations& video = out.annotations;
  video.video_id = VideoIdForSeed(seed);
  video.frame_count = rng.Int(180, 240);
  video.frame_width = opt.width;
  video.frame_height = opt.height;
  video.fps = {opt.fps, 1};
  const int n = video.frame_count;
  const double W = opt.width;
  const double H = opt.height;

  std::vector<TrackId> ids(99);
  std::iota(ids.begin(), ids.end(), TrackId{1});
  for (std::size_t i = ids.size() - 1; i > 0; --i) {
    std::swap(ids[i], ids[static_cast<std::size_t>(rng.Int(0, static_cast<int>(i)))]);
  }
  std::size_t next_id = 0;

  // Apparent ego flow: scene content drifts down the frame.
  const Point flow{rng.Uniform(-0.4, 0.4), rng.Uniform(0.8, 1.6)};

  auto add_caption = [&](TrackId id, int frame, const std::string& model,
                         const std::string& text) {
    out.captions.push_back({video.video_id, id, frame, model, text});
  };

  const int traffic = rng.Int(3, 5);
  for (int i = 0; i < traffic; ++i) {
    Motion m;
    m.first = rng.Int(0, 10);
    m.last = n - 1;
    m.w = rng.Uniform(100, 220);
    m.h = m.w * rng.Uniform(0.6, 0.9);
    m.velocity = {flow.x + rng.Uniform(-0.3, 0.3), flow.y + rng.Uniform(-0.2, 0.2)};
    Place(m, {rng.Uniform(0.2 * W, 0.8 * W), rng.Uniform(0.45 * H, 0.7 * H)},
          opt.width, opt.height);
    const TrackId id = ids[next_id++];
    video.tracks[id] = MakeTrack(video.video_id, id, TrackKind::kTrafficScene, m);
    out.labels.push_back({video.video_id, id, "car", 0.9});
  }

  const int distractors = rng.Int(2, 4);
  const bool car_ahead = rng.Chance(0.5);
  for (int i = 0; i < distractors; ++i) {
    Motion m;
    std::string label;
    Point preferred;
    if (i == 0 && car_ahead) {
      // A car right ahead: the object the center heuristic latches onto.
      m.first = 0;
      m.last = n - 1;
      m.w = rng.Uniform(60, 110);
      m.h = m.w * 0.75;
      m.velocity = {flow.x * 0.2, flow.y * 0.2};
      preferred = {W / 2 + rng.Uniform(-30, 30), H / 2 + rng.Uniform(-20, 30)};
      label = "car";
    } else {
      const bool left = rng.Chance(0.5);
      m.first = rng.Int(0, 10);
      m.last = n - 1;
      m.w = rng.Uniform(40, 120);
      m.h = m.w * rng.Uniform(0.7, 1.3);
      const double outward = rng.Uniform(0.3, 1.0) * (left ? -1.0 : 1.0);
      m.velocity = {flow.x + outward, flow.y};
      preferred = {left ? rng.Uniform(0.05 * W, 0.25 * W) : rng.Uniform(0.75 * W, 0.95 * W),
                   rng.Uniform(0.35 * H, 0.65 * H)};
      label = rng.Chance(0.7) ? rng.Pick(kDenylisted) : rng.Pick(kHarmless);
    }
    Place(m, preferred, opt.width, opt.height);
    const TrackId id = ids[next_id++];
    video.tracks[id] = MakeTrack(video.video_id, id, TrackKind::kChallengeObject, m);
    out.labels.push_back({video.video_id, id, label, rng.Uniform(0.5, 0.95)});
    for (int f = m.first; f <= m.last; f += 2 * opt.caption_stride) {
      add_caption(id, f, kModels[0], "a " + label + " on the side of the road");
      add_caption(id, f, kModels[2], "a " + label);
      add_caption(id, f, kModels[3], rng.Pick(kDistractorCaptions));
    }
  }

  // The hazard: appears, holds still, then darts sideways.
  {
    Motion m;
    m.first = rng.Int(40, 80);
    m.hold = m.first + rng.Int(opt.min_lead_frames, opt.min_lead_frames + 12);
    const double speed = rng.Uniform(4.0, 9.0);
    const double dir = rng.Chance(0.5) ? 1.0 : -1.0;
    m.velocity = {dir * speed, rng.Uniform(-0.3, 0.3)};
    m.last = std::min(n - 1, m.hold + rng.Int(30, 60));
    m.last = std::min(m.last, m.hold + static_cast<int>(560.0 / speed));
    m.w = rng.Uniform(50, 110);
    m.h = m.w * rng.Uniform(0.7, 1.2);
    const double path = speed * (m.last - m.hold);
    Place(m, {W / 2 - dir * path / 2 + rng.Uniform(-120, 120), rng.Uniform(0.6 * H, 0.8 * H)},
          opt.width, opt.height);

    const TrackId id = ids[next_id++];
    video.tracks[id] = MakeTrack(video.video_id, id, TrackKind::kChallengeObject, m);
    out.hazard_track = id;
    out.reaction_frame = m.hold;

    const std::string animal = rng.Pick(kAnimals);
    out.hazard_caption = Fill(rng.Pick(kHazardTemplates), animal);
    out.labels.push_back({video.video_id, id, animal, rng.Uniform(0.6, 0.95)});
    out.labels.push_back({video.video_id, id, "animal", rng.Uniform(0.2, 0.5)});
    for (int f = m.first; f <= m.last; f += opt.caption_stride) {
      add_caption(id, f, kModels[0], Capitalize(out.hazard_caption));
      add_caption(id, f, kModels[1], out.hazard_caption);
      // Two different distractors per frame, so none can reach the
      // two-per-frame credit of the true caption.
      const int a = rng.Int(0, static_cast<int>(kDistractorCaptions.size()) - 1);
      int b = rng.Int(0, static_cast<int>(kDistractorCaptions.size()) - 2);
      if (b >= a) ++b;
      add_caption(id, f, kModels[2], kDistractorCaptions[std::size_t(a)]);
      add_caption(id, f, kModels[3], kDistractorCaptions[std::size_t(b)]);
    }

    out.truth.reaction_frame = m.hold;
    out.truth.frame_count = n;
    for (int f = m.first; f <= m.last; ++f) {
      out.truth.frames[f] = {{id}, {out.hazard_caption}};
    }
  }

  // Audio: low noise floor with a loud burst when the hazard starts moving.
  AudioTrack& audio = out.audio;
  audio.sample_rate = opt.sample_rate;
  const std::size_t total =
      static_cast<std::size_t>(std::int64_t(n) * opt.sample_rate / opt.fps);
  audio.samples.resize(total);
  const std::size_t burst_begin = static_cast<std::size_t>(
      std::int64_t(out.reaction_frame) * opt.sample_rate / opt.fps);
  const std::size_t burst_end = std::min(
      total, burst_begin + static_cast<std::size_t>(opt.sample_rate) *
                               static_cast<std::size_t>(opt.burst_ms) / 1000);
  for (std::size_t i = 0; i < total; ++i) {
    const double amp = (i >= burst_begin && i < burst_end) ? opt.burst_amplitude
                                                          : opt.audio_noise;
    audio.samples[i] = static_cast<float>(rng.Uniform(-amp, amp));
  }
  return out;
}

std::vector<FixtureVideo> GenerateFixture(std::uint64_t first_seed, int n_videos,
                                          const FixtureOptions& options) {
  std::vector<FixtureVideo> videos;
  for (int k = 0; k < n_videos; ++k) {
    videos.push_back(GenerateVideo(first_seed + std::uint64_t(k), options));
  }
  return videos;
}

pipeline::PipelineInputs ToInputs(const std::vector<FixtureVideo>& videos) {
  pipeline::PipelineInputs inputs;
  auto audio = std::make_shared<std::map<std::string, AudioTrack>>();
  for (const FixtureVideo& v : videos) {
    inputs.videos.push_back(v.annotations);
    inputs.captions.insert(inputs.captions.end(), v.captions.begin(), v.captions.end());
    inputs.labels.insert(inputs.labels.end(), v.labels.begin(), v.labels.end());
    (*audio)[v.annotations.video_id] = v.audio;
  }
  inputs.audio = [audio](const std::string& id) -> std::optional<AudioTrack> {
    auto it = audio->find(id);
    if (it == audio->end()) return std::nullopt;
    return it->second;
  };
  return inputs;
}

GroundTruth TruthOf(const std::vector<FixtureVideo>& videos) {
  GroundTruth truth;
  for (const FixtureVideo& v : videos) truth[v.annotations.video_id] = v.truth;
  return truth;
}

void WriteFixture(const std::vector<FixtureVideo>& videos,
                  const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "audio");
  auto open = [](const fs::path& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    return out;
  };

  std::vector<VideoAnnotations> annotations;
  std::vector<CaptionCandidate> captions;
  std::vector<LabelCandidate> labels;
  for (const FixtureVideo& v : videos) {
    annotations.push_back(v.annotations);
    captions.insert(captions.end(), v.captions.begin(), v.captions.end());
    labels.insert(labels.end(), v.labels.begin(), v.labels.end());
    auto wav = open(dir / "audio" / (v.annotations.video_id + ".wav"),
                    std::ios::out | std::ios::binary);
    WriteWav16(v.audio, wav);
  }
  auto tracks = open(dir / "tracks.jsonl");
  SerializeTracks(annotations, tracks);
  auto caps = open(dir / "captions.jsonl");
  SerializeCaptionCandidates(captions, caps);
  auto labs = open(dir / "labels.jsonl");
  SerializeLabelCandidates(labels, labs);
  auto truth = open(dir / "truth.json");
  WriteGroundTruth(TruthOf(videos), truth);
}

}  // namespace dashcam::fixture
