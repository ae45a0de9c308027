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

// dashcam: reaction, hazard and caption predictions from dashcam track
// annotations, plus fixture generation and scoring.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dashcam/audio.h"
#include "dashcam/config.h"
#include "dashcam/error.h"
#include "dashcam/fixture.h"
#include "dashcam/io.h"
#include "dashcam/metrics.h"
#include "dashcam/pipeline.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitConfig = 2;

struct RunFlags {
  std::string config;
  std::string tracks;
  std::string audio_dir;
  std::string captions;
  std::string labels;
  std::string out;
  std::string report;
  std::string truth;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> reaction_mode;
  std::optional<std::string> caption_mode;
  std::optional<int> top_k;
  std::optional<double> epsilon;
  std::optional<int> draws;
  std::optional<int> chunksize;
};

std::ifstream OpenInput(const fs::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw dashcam::InputError(std::string("cannot open ") + what + " " + path.string());
  return in;
}

std::ofstream OpenOutput(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw dashcam::InputError("cannot write " + path.string());
  return out;
}

dashcam::config::RunConfig ResolveRunConfig(const RunFlags& flags) {
  using dashcam::ConfigError;
  dashcam::config::RunConfig cfg;
  if (!flags.config.empty()) cfg = dashcam::config::LoadRunConfig(flags.config);
  auto& paths = cfg.paths;
  if (!flags.tracks.empty()) paths.tracks = flags.tracks;
  if (!flags.audio_dir.empty()) paths.audio_dir = flags.audio_dir;
  if (!flags.captions.empty()) paths.captions = flags.captions;
  if (!flags.labels.empty()) paths.labels = flags.labels;
  if (!flags.out.empty()) paths.out = flags.out;
  if (!flags.truth.empty()) paths.truth = flags.truth;

  auto& p = cfg.pipeline;
  if (flags.seed) p.ensemble.seed = *flags.seed;
  if (flags.workers) p.workers = *flags.workers;
  if (flags.top_k) p.ensemble.top_k = *flags.top_k;
  if (flags.epsilon) p.ensemble.epsilon = *flags.epsilon;
  if (flags.draws) p.ensemble.num_draws = *flags.draws;
  if (flags.chunksize) p.speed.chunksize = *flags.chunksize;
  if (flags.reaction_mode) {
    auto mode = dashcam::config::ParseReactionMode(*flags.reaction_mode);
    if (!mode) throw ConfigError("--reaction-mode must be speed, sound or both");
    p.reaction_mode = *mode;
  }
  if (flags.caption_mode) {
    auto mode = dashcam::config::ParseCaptionMode(*flags.caption_mode);
    if (!mode) throw ConfigError("--caption-mode must be alg2 or word35");
    p.caption_mode = *mode;
  }
  p.Validate();
  if (paths.tracks.empty()) throw ConfigError("no tracks file given (--tracks or paths.tracks)");
  if (paths.out.empty()) throw ConfigError("no output file given (--out or paths.out)");
  return cfg;
}

int Run(const RunFlags& flags) {
  const dashcam::config::RunConfig cfg = ResolveRunConfig(flags);
  const auto& paths = cfg.paths;

  dashcam::pipeline::PipelineInputs inputs;
  {
    auto in = OpenInput(paths.tracks, "tracks");
    auto parsed = dashcam::ParseTracks(in);
    for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << "\n";
    inputs.videos = std::move(parsed.videos);
  }
  if (!paths.captions.empty()) {
    auto in = OpenInput(paths.captions, "captions");
    auto parsed = dashcam::ParseCaptionCandidates(in);
    for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << "\n";
    inputs.captions = std::move(parsed.candidates);
  }
  if (!paths.labels.empty()) {
    auto in = OpenInput(paths.labels, "labels");
    inputs.labels = dashcam::ParseLabelCandidates(in);
  }
  if (!paths.audio_dir.empty()) {
    const fs::path dir = paths.audio_dir;
    inputs.audio = [dir](const std::string& id) -> std::optional<dashcam::AudioTrack> {
      const fs::path wav = dir / (id + ".wav");
      if (!fs::exists(wav)) return std::nullopt;
      return dashcam::ReadWavFile(wav);
    };
  }

  const auto result = dashcam::pipeline::RunPipeline(inputs, cfg.pipeline);
  {
    auto out = OpenOutput(paths.out);
    dashcam::WriteSubmission(result.predictions, out, cfg.pipeline.submission);
  }
  fs::path report = flags.report;
  if (report.empty()) report = fs::path(paths.out).replace_extension(".report.json");
  OpenOutput(report) << dashcam::pipeline::RunReportJson(result) << "\n";

  for (const auto& v : result.videos) {
    if (!v.ok) std::cerr << "error: " << v.video_id << ": " << v.error << "\n";
  }
  std::cout << "videos: " << result.videos.size()
            << "  failed: " << result.videos.size() - result.predictions.size()
            << "  submission: " << paths.out.string() << "  report: " << report.string()
            << "\n";

  if (!paths.truth.empty()) {
    auto in = OpenInput(paths.truth, "truth");
    const auto scores = dashcam::metrics::ScoreRun(result.predictions,
                                                   dashcam::ParseGroundTruth(in),
                                                   cfg.pipeline.words.char_limit);
    std::cout << dashcam::metrics::ScoreReportJson(scores) << "\n";
  }
  return result.ok ? 0 : kExitInput;
}

int Fixture(std::uint64_t seed, int n_videos, const std::string& dir) {
  if (n_videos < 1) throw dashcam::ConfigError("--n-videos must be >= 1");
  const auto videos = dashcam::fixture::GenerateFixture(seed, n_videos);
  dashcam::fixture::WriteFixture(videos, dir);
  std::cout << "wrote " << videos.size() << " videos to " << dir << "\n";
  return 0;
}

int Score(const std::string& predictions, const std::string& truth, const std::string& out,
          int char_limit) {
  auto pin = OpenInput(predictions, "predictions");
  auto tin = OpenInput(truth, "truth");
  const auto scores = dashcam::metrics::ScoreRun(dashcam::ParseSubmission(pin),
                                                 dashcam::ParseGroundTruth(tin), char_limit);
  const std::string json = dashcam::metrics::ScoreReportJson(scores);
  std::cout << json << "\n";
  if (!out.empty()) OpenOutput(out) << json << "\n";
  return 0;
}

int Inspect(const std::string& tracks) {
  auto in = OpenInput(tracks, "tracks");
  const auto parsed = dashcam::ParseTracks(in);
  std::cout << "observations read: " << parsed.observations_read
            << "  dropped degenerate: " << parsed.dropped_degenerate << "\n";
  for (const auto& v : parsed.videos) {
    std::size_t challenge = 0;
    std::size_t observations = 0;
    for (const auto& [id, t] : v.tracks) {
      challenge += t.kind == dashcam::TrackKind::kChallengeObject;
      observations += t.observations.size();
    }
    std::printf("%s  frames=%d  %dx%d  fps=%s  tracks=%zu (challenge %zu)  boxes=%zu\n",
                v.video_id.c_str(), v.frame_count, v.frame_width, v.frame_height,
                v.fps.ToString().c_str(), v.tracks.size(), challenge, observations);
  }
  for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driver reaction, hazard and caption prediction from dashcam tracks"};
  app.require_subcommand(1);

  RunFlags run;
  auto* run_cmd = app.add_subcommand("run", "Predict every video and write a submission CSV");
  run_cmd->add_option("--config", run.config, "JSON run config; flags override it");
  run_cmd->add_option("--tracks", run.tracks, "Tracks JSONL");
  run_cmd->add_option("--audio-dir", run.audio_dir, "Directory of <video_id>.wav files");
  run_cmd->add_option("--captions", run.captions, "Caption candidates JSONL");
  run_cmd->add_option("--labels", run.labels, "Label candidates JSONL");
  run_cmd->add_option("--out", run.out, "Submission CSV path");
  run_cmd->add_option("--report", run.report, "Run report path [<out>.report.json]");
  run_cmd->add_option("--truth", run.truth, "Ground truth JSON; prints scores when given");
  run_cmd->add_option("--seed", run.seed, "Ensemble seed");
  run_cmd->add_option("--workers", run.workers, "Worker threads");
  run_cmd->add_option("--reaction-mode", run.reaction_mode, "speed, sound or both");
  run_cmd->add_option("--caption-mode", run.caption_mode, "alg2 or word35");
  run_cmd->add_option("--top-k", run.top_k, "Hazards kept per video");
  run_cmd->add_option("--epsilon", run.epsilon, "Ensemble noise knob; noise sd is 1/epsilon");
  run_cmd->add_option("--draws", run.draws, "Ensemble draws");
  run_cmd->add_option("--chunksize", run.chunksize, "Speed regression window");

  std::uint64_t fixture_seed = 1;
  int fixture_videos = 10;
  std::string fixture_dir;
  auto* fixture_cmd = app.add_subcommand("fixture", "Write a synthetic fixture");
  fixture_cmd->add_option("--seed", fixture_seed, "First video seed")->capture_default_str();
  fixture_cmd->add_option("--n-videos", fixture_videos, "Number of videos")
      ->capture_default_str();
  fixture_cmd->add_option("--out", fixture_dir, "Output directory")->required();

  std::string score_predictions;
  std::string score_truth;
  std::string score_out;
  int score_char_limit = 35;
  auto* score_cmd = app.add_subcommand("score", "Score a submission CSV against ground truth");
  score_cmd->add_option("--predictions", score_predictions, "Submission CSV")->required();
  score_cmd->add_option("--truth", score_truth, "Ground truth JSON")->required();
  score_cmd->add_option("--out", score_out, "Write the score report here too");
  score_cmd->add_option("--char-limit", score_char_limit, "Caption prefix length")
      ->capture_default_str();

  std::string inspect_tracks;
  auto* inspect_cmd = app.add_subcommand("inspect", "Summarize a tracks file");
  inspect_cmd->add_option("--tracks", inspect_tracks, "Tracks JSONL")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) return Run(run);
    if (*fixture_cmd) return Fixture(fixture_seed, fixture_videos, fixture_dir);
    if (*score_cmd) return Score(score_predictions, score_truth, score_out, score_char_limit);
    if (*inspect_cmd) return Inspect(inspect_tracks);
  } catch (const dashcam::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const dashcam::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  }
  return 0;
}
