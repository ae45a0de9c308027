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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "dashcam/config.h"
#include "dashcam/error.h"
#include "dashcam/fixture.h"
#include "dashcam/io.h"
#include "dashcam/metrics.h"

namespace dashcam::pipeline {
namespace {

std::string Csv(const RunResult& result, const PipelineConfig& cfg) {
  std::ostringstream out;
  WriteSubmission(result.predictions, out, cfg.submission);
  return out.str();
}

TEST(FixtureTest, DeterministicInSeed) {
  const auto a = fixture::GenerateVideo(17);
  const auto b = fixture::GenerateVideo(17);
  EXPECT_EQ(a.annotations, b.annotations);
  EXPECT_EQ(a.audio.samples, b.audio.samples);
  EXPECT_EQ(a.captions, b.captions);
  EXPECT_EQ(a.reaction_frame, b.reaction_frame);
  EXPECT_NE(fixture::GenerateVideo(18).annotations, a.annotations);
  EXPECT_EQ(fixture::VideoIdForSeed(17), "video_000017");
}

TEST(FixtureTest, TruthIsConsistent) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto v = fixture::GenerateVideo(seed);
    const auto& hazard = v.annotations.tracks.at(v.hazard_track);
    EXPECT_EQ(hazard.kind, TrackKind::kChallengeObject);
    EXPECT_GE(v.reaction_frame - hazard.first_frame(), fixture::FixtureOptions{}.min_lead_frames);
    EXPECT_EQ(v.truth.reaction_frame, v.reaction_frame);
    EXPECT_EQ(v.truth.frame_count, v.annotations.frame_count);
    for (const auto& [f, ft] : v.truth.frames) {
      EXPECT_NE(hazard.at_frame(f), nullptr);
      EXPECT_EQ(ft.hazard_track_ids, std::vector<TrackId>{v.hazard_track});
      EXPECT_EQ(ft.hazard_captions, std::vector<std::string>{v.hazard_caption});
    }
    EXPECT_EQ(v.truth.frames.size(), hazard.observations.size());
  }
}

TEST(FixtureTest, FilesRoundTrip) {
  const auto dir = std::filesystem::path(::testing::TempDir()) / "dashcam_fixture_rt";
  std::filesystem::remove_all(dir);
  const auto videos = fixture::GenerateFixture(5, 3);
  fixture::WriteFixture(videos, dir);

  std::ifstream tracks(dir / "tracks.jsonl");
  const auto parsed = ParseTracks(tracks);
  ASSERT_EQ(parsed.videos.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(parsed.videos[i], videos[i].annotations);

  std::ifstream captions(dir / "captions.jsonl");
  std::size_t total = 0;
  for (const auto& v : videos) total += v.captions.size();
  EXPECT_EQ(ParseCaptionCandidates(captions).candidates.size(), total);

  std::ifstream truth(dir / "truth.json");
  const GroundTruth gt = ParseGroundTruth(truth);
  EXPECT_EQ(gt.size(), 3u);
  EXPECT_EQ(gt.at(videos[1].annotations.video_id).reaction_frame, videos[1].reaction_frame);
  EXPECT_TRUE(std::filesystem::exists(dir / "audio" / (videos[0].annotations.video_id + ".wav")));
}

TEST(PipelineTest, ClosedLoopSmall) {
  const auto videos = fixture::GenerateFixture(1, 10);
  PipelineConfig cfg;
  const auto result = RunPipeline(fixture::ToInputs(videos), cfg);
  ASSERT_TRUE(result.ok);
  const auto scores = metrics::ScoreRun(result.predictions, fixture::TruthOf(videos));
  EXPECT_GE(scores.aggregate.reaction, 0.9);
  EXPECT_GE(scores.aggregate.hazard, 0.9);
  EXPECT_GE(scores.aggregate.overall, 0.85);
}

TEST(PipelineTest, DeterministicAcrossRunsAndWorkers) {
  const auto inputs = fixture::ToInputs(fixture::GenerateFixture(40, 8));
  PipelineConfig one;
  PipelineConfig many = one;
  many.workers = 8;
  const auto a = RunPipeline(inputs, one);
  const auto b = RunPipeline(inputs, one);
  const auto c = RunPipeline(inputs, many);
  EXPECT_EQ(Csv(a, one), Csv(b, one));
  EXPECT_EQ(Csv(a, one), Csv(c, one));
  EXPECT_EQ(RunReportJson(a, false), RunReportJson(c, false));
}

TEST(PipelineTest, MissingAudioFallsBackToSpeed) {
  auto inputs = fixture::ToInputs(fixture::GenerateFixture(3, 2));
  inputs.audio = nullptr;
  const auto result = RunPipeline(inputs, PipelineConfig{});
  ASSERT_TRUE(result.ok);
  for (const auto& v : result.videos) {
    EXPECT_FALSE(v.sound_frame);
    EXPECT_NE(std::find(v.warnings.begin(), v.warnings.end(), "no audio; speed-only fallback"),
              v.warnings.end());
  }
  PipelineConfig speed_only;
  speed_only.reaction_mode = ReactionMode::kSpeed;
  for (const auto& v : RunPipeline(inputs, speed_only).videos) EXPECT_TRUE(v.warnings.empty());
}

TEST(PipelineTest, PerVideoErrorsAreCaptured) {
  auto inputs = fixture::ToInputs(fixture::GenerateFixture(3, 3));
  const std::string bad = inputs.videos[1].video_id;
  auto good_audio = inputs.audio;
  inputs.audio = [bad, good_audio](const std::string& id) -> std::optional<AudioTrack> {
    if (id == bad) throw InputError("corrupt audio");
    return good_audio(id);
  };
  const auto result = RunPipeline(inputs, PipelineConfig{});
  EXPECT_FALSE(result.ok);
  EXPECT_EQ(result.predictions.size(), 2u);
  EXPECT_FALSE(result.predictions.contains(bad));
  const auto& failed = result.videos[1];
  EXPECT_FALSE(failed.ok);
  EXPECT_NE(failed.error.find("corrupt audio"), std::string::npos);
}

TEST(PipelineTest, NoChallengeObjects) {
  auto v = fixture::GenerateVideo(9).annotations;
  std::erase_if(v.tracks, [](const auto& e) { return e.second.kind == TrackKind::kChallengeObject; });
  PipelineInputs inputs;
  inputs.videos.push_back(v);
  const auto result = RunPipeline(inputs, PipelineConfig{});
  ASSERT_TRUE(result.ok);
  for (const auto& f : result.predictions.at(v.video_id)) EXPECT_TRUE(f.hazards.empty());
}

TEST(PipelineConfigTest, Validation) {
  EXPECT_NO_THROW(PipelineConfig{}.Validate());
  PipelineConfig cfg;
  cfg.workers = 0;
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg = {};
  cfg.ensemble.top_k = 30;
  EXPECT_THROW(cfg.Validate(), ConfigError);
}

TEST(ConfigTest, ParsesRunConfig) {
  std::istringstream in(R"({
    "paths": {"tracks": "t.jsonl", "out": "o.csv"},
    "peak": {"z_threshold": 4.0},
    "speed": {"chunksize": 12, "velocity": "prefix"},
    "sound": {"envelope_ms": 20, "peak": {"window": 40}},
    "ensemble": {"epsilon": 2.5, "num_draws": 11, "top_k": 2, "seed": 7,
                 "weights": [1, 2, 3, 4, 5, 6]},
    "words": {"char_limit": 20},
    "caption_mode": "word35",
    "reaction_mode": "speed",
    "workers": 3,
    "hazard_slots": 5,
    "lowercase_bools": true
  })");
  const auto cfg = config::ParseRunConfig(in);
  EXPECT_EQ(cfg.paths.tracks, "t.jsonl");
  EXPECT_EQ(cfg.paths.out, "o.csv");
  EXPECT_EQ(cfg.pipeline.speed.peak.z_threshold, 4.0);
  EXPECT_EQ(cfg.pipeline.sound.peak.z_threshold, 4.0);
  EXPECT_EQ(cfg.pipeline.sound.peak.window, 40);
  EXPECT_EQ(cfg.pipeline.speed.chunksize, 12);
  EXPECT_EQ(cfg.pipeline.speed.velocity, reaction::VelocityMode::kPrefix);
  EXPECT_EQ(cfg.pipeline.sound.envelope_ms, 20);
  EXPECT_EQ(cfg.pipeline.ensemble.epsilon, 2.5);
  EXPECT_EQ(cfg.pipeline.ensemble.seed, 7u);
  EXPECT_EQ(cfg.pipeline.ensemble.weights[5], 6.0);
  EXPECT_EQ(cfg.pipeline.words.char_limit, 20);
  EXPECT_EQ(cfg.pipeline.caption_mode, caption::CaptionMode::kWordLevel);
  EXPECT_EQ(cfg.pipeline.reaction_mode, ReactionMode::kSpeed);
  EXPECT_EQ(cfg.pipeline.workers, 3);
  EXPECT_EQ(cfg.pipeline.submission.hazard_slots, 5);
  EXPECT_TRUE(cfg.pipeline.submission.lowercase_bools);
}

TEST(ConfigTest, RejectsBadInput) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return config::ParseRunConfig(in);
  };
  EXPECT_THROW(parse("{"), ConfigError);
  EXPECT_THROW(parse(R"({"bogus": 1})"), ConfigError);
  EXPECT_THROW(parse(R"({"ensemble": {"epsilon": "big"}})"), ConfigError);
  // Values are range-checked once command-line overrides have been applied.
  const auto negative = parse(R"({"ensemble": {"epsilon": -1}})");
  EXPECT_THROW(negative.pipeline.Validate(), ConfigError);
  EXPECT_THROW(parse(R"({"ensemble": {"weights": [1, 2]}})"), ConfigError);
  EXPECT_THROW(parse(R"({"reaction_mode": "telepathy"})"), ConfigError);
  EXPECT_THROW(parse(R"({"speed": {"velocity": "sideways"}})"), ConfigError);
  EXPECT_THROW(config::LoadRunConfig("/nonexistent/config.json"), ConfigError);
}

TEST(ConfigTest, EnsembleAndWordFiles) {
  std::istringstream e(R"({"zone": [[0,0],[1,0],[1,1]], "denylist": ["cow"], "tau": 10})");
  const auto ensemble = config::ParseEnsembleConfig(e);
  EXPECT_EQ(ensemble.zone.size(), 3u);
  EXPECT_EQ(ensemble.denylist, std::set<std::string>{"cow"});
  EXPECT_EQ(ensemble.tau, 10.0);
  std::istringstream w(R"({"stopwords": ["a"], "divide_area_by_tokens": true})");
  const auto words = config::ParseWordConfig(w);
  EXPECT_EQ(words.stopwords, std::set<std::string>{"a"});
  EXPECT_TRUE(words.divide_area_by_tokens);
  std::istringstream bad(R"({"char_limit": 0})");
  EXPECT_THROW(config::ParseWordConfig(bad), ConfigError);
}

TEST(ReportTest, JsonShape) {
  const auto result = RunPipeline(fixture::ToInputs(fixture::GenerateFixture(2, 2)),
                                  PipelineConfig{});
  const auto doc = nlohmann::json::parse(RunReportJson(result));
  ASSERT_TRUE(doc.contains("videos"));
  EXPECT_EQ(doc["videos"].size(), 2u);
}

}  // namespace
}  // namespace dashcam::pipeline
