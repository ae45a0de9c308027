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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dashcam/caption.h"
#include "dashcam/fixture.h"
#include "dashcam/hazard.h"
#include "dashcam/metrics.h"
#include "dashcam/pipeline.h"
#include "dashcam/reaction.h"
#include "dashcam/text.h"

namespace {

using namespace dashcam;

// Pinned thresholds.
constexpr int kFixtureVideos = 100;
constexpr double kMinReactionRecovery = 0.90;
constexpr double kMinHazardRecovery = 0.90;
constexpr double kMinOverall = 0.85;
constexpr double kMaxFixtureSeconds = 60.0;
constexpr int kSpeedTracks = 50;
constexpr int kZeroNoiseInstances = 200;
constexpr double kZeroNoiseEpsilon = 1e9;
constexpr int kScalingInstances = 100;
constexpr int kCaptionSets = 1000;
constexpr int kFuzzedMaps = 10000;
constexpr double kMetricTolerance = 1e-12;
constexpr int kSoundRealizations = 20;
constexpr int kBurstFrameLo = 120;
constexpr int kBurstFrameHi = 123;

int failures = 0;

void Report(const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] %-34s %s\n", pass ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string Format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

Track Centers(const std::vector<Point>& c, int first_frame = 0) {
  Track t;
  t.video_id = "v";
  t.track_id = 1;
  int f = first_frame;
  for (const Point& p : c) t.observations.push_back({f++, {p.x - 15, p.y - 15, p.x + 15, p.y + 15}});
  return t;
}

hazard::WeakScores RandomScores(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  hazard::WeakScores scores;
  for (int i = 0; i < n; ++i) {
    hazard::ScoreVector s;
    for (double& v : s) v = u(rng);
    scores[TrackId(i + 1)] = s;
  }
  return scores;
}

void FixtureClosedLoop() {
  const auto start = std::chrono::steady_clock::now();
  const auto videos = fixture::GenerateFixture(1, kFixtureVideos);
  pipeline::PipelineConfig cfg;
  const auto result = pipeline::RunPipeline(fixture::ToInputs(videos), cfg);
  const auto scores = metrics::ScoreRun(result.predictions, fixture::TruthOf(videos));
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  int reaction_hits = 0;
  int hazard_hits = 0;
  const int tolerance = 2 * cfg.speed.chunksize;
  for (std::size_t i = 0; i < videos.size(); ++i) {
    const auto& v = result.videos[i];
    if (v.verdict.frame && std::abs(*v.verdict.frame - videos[i].reaction_frame) <= tolerance) {
      ++reaction_hits;
    }
    if (!v.ballot.winners.empty() && v.ballot.winners.front() == videos[i].hazard_track) {
      ++hazard_hits;
    }
  }
  const double n = double(videos.size());
  const bool pass = result.ok && reaction_hits / n >= kMinReactionRecovery &&
                    hazard_hits / n >= kMinHazardRecovery &&
                    scores.aggregate.overall >= kMinOverall && seconds < kMaxFixtureSeconds;
  Report("fixture closed loop", pass,
         Format("reaction %d/%d (+-%d) hazard %d/%d overall %.4f in %.2fs", reaction_hits,
                kFixtureVideos, tolerance, hazard_hits, kFixtureVideos, scores.aggregate.overall,
                seconds));
}

void SpeedFidelity() {
  const reaction::SpeedConfig cfg;
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> pos(100, 1100);
  std::uniform_real_distribution<double> vel(-6, 6);
  std::uniform_real_distribution<double> angle(0, 2 * std::numbers::pi);
  std::uniform_real_distribution<double> jump(4, 10);
  std::uniform_int_distribution<int> hold(40, 90);
  std::uniform_int_distribution<int> first(0, 30);

  int false_positives = 0;
  for (int i = 0; i < kSpeedTracks; ++i) {
    const Point p0{pos(rng), pos(rng) * 0.6};
    const Point v{vel(rng), vel(rng)};
    std::vector<Point> c;
    for (int k = 0; k < 150; ++k) c.push_back({p0.x + v.x * k, p0.y + v.y * k});
    if (reaction::SpeedAnomaly(Centers(c, first(rng)), cfg)) ++false_positives;
  }

  int detected = 0;
  const int tolerance = 2 * cfg.chunksize;
  for (int i = 0; i < kSpeedTracks; ++i) {
    const Point p0{pos(rng), pos(rng) * 0.6};
    const Point v0{vel(rng) / 3, vel(rng) / 3};
    const double a = angle(rng);
    const double dv = jump(rng);
    const Point v1{v0.x + dv * std::cos(a), v0.y + dv * std::sin(a)};
    const int h = hold(rng);
    const int f0 = first(rng);
    std::vector<Point> c;
    Point p = p0;
    for (int k = 0; k < h + 60; ++k) {
      c.push_back(p);
      const Point& v = k < h ? v0 : v1;
      p = {p.x + v.x, p.y + v.y};
    }
    // Velocity changes between observation h and h + 1.
    const int step = f0 + h;
    auto frame = reaction::SpeedAnomaly(Centers(c, f0), cfg);
    if (frame && std::abs(*frame - step) <= tolerance) ++detected;
  }
  Report("speed detector fidelity", false_positives == 0 && detected == kSpeedTracks,
         Format("constant: %d/%d false positives, step: %d/%d within +-%d", false_positives,
                kSpeedTracks, detected, kSpeedTracks, tolerance));
}

void ZeroNoiseLimit() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> w(0.1, 3.0);
  std::uniform_int_distribution<int> tracks(1, 12);
  std::uniform_int_distribution<int> draws(1, 201);
  int agree = 0;
  for (int i = 0; i < kZeroNoiseInstances; ++i) {
    hazard::EnsembleConfig cfg;
    for (double& x : cfg.weights) x = w(rng);
    cfg.epsilon = kZeroNoiseEpsilon;
    cfg.num_draws = draws(rng);
    cfg.seed = rng();
    const auto scores = RandomScores(rng, tracks(rng));
    // Noiseless argmax, written out: highest combined, ties to lower id.
    TrackId best = 0;
    double best_value = -1;
    for (const auto& [id, s] : scores) {
      double total = 0;
      for (std::size_t k = 0; k < s.size(); ++k) total += cfg.weights[k] * s[k];
      if (total > best_value) {
        best = id;
        best_value = total;
      }
    }
    const auto ballot = hazard::Vote(scores, cfg);
    if (ballot.winners == std::vector<TrackId>{best}) ++agree;
  }
  Report("zero-noise ensemble limit", agree == kZeroNoiseInstances,
         Format("%d/%d instances equal the noiseless argmax", agree, kZeroNoiseInstances));
}

void EnsembleDeterminism() {
  std::mt19937_64 rng(303);
  int same = 0;
  const int instances = 50;
  for (int i = 0; i < instances; ++i) {
    hazard::EnsembleConfig cfg;
    cfg.epsilon = 1.0;
    cfg.num_draws = 501;
    cfg.top_k = 1 + i % 3;
    cfg.seed = rng();
    const auto scores = RandomScores(rng, 3 + i % 8);
    const auto a = hazard::Vote(scores, cfg, 1);
    const auto b = hazard::Vote(scores, cfg, 1);
    const auto c = hazard::Vote(scores, cfg, 8);
    if (a == b && a == c) ++same;
  }
  const auto videos = fixture::GenerateFixture(500, 12);
  const auto inputs = fixture::ToInputs(videos);
  pipeline::PipelineConfig one;
  pipeline::PipelineConfig eight = one;
  eight.workers = 8;
  const auto r1 = pipeline::RunPipeline(inputs, one);
  const auto r2 = pipeline::RunPipeline(inputs, one);
  const auto r8 = pipeline::RunPipeline(inputs, eight);
  const bool runs_equal = r1.predictions == r2.predictions && r1.predictions == r8.predictions &&
                          pipeline::RunReportJson(r1, false) == pipeline::RunReportJson(r8, false);
  Report("ensemble determinism", same == instances && runs_equal,
         Format("ballots %d/%d identical (2 runs, workers 1 vs 8); pipeline runs %s", same,
                instances, runs_equal ? "identical" : "differ"));
}

void JointScaling() {
  // Winners must not move when every base weight is multiplied by k. The
  // noise standard deviation is 1/epsilon, so it scales with the weights
  // when epsilon is divided by k.
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> w(0.2, 2.0);
  int unchanged = 0;
  int literal_unchanged = 0;
  for (int i = 0; i < kScalingInstances; ++i) {
    hazard::EnsembleConfig cfg;
    for (double& x : cfg.weights) x = w(rng);
    cfg.epsilon = 2.0;
    cfg.num_draws = 101;
    cfg.top_k = 1 + i % 2;
    cfg.seed = rng();
    const auto scores = RandomScores(rng, 4 + i % 5);
    const auto base = hazard::Vote(scores, cfg).winners;
    bool all = true;
    bool literal_all = true;
    for (double k : {0.5, 2.0, 10.0}) {
      hazard::EnsembleConfig scaled = cfg;
      for (double& x : scaled.weights) x *= k;
      scaled.epsilon = cfg.epsilon / k;
      all = all && hazard::Vote(scores, scaled).winners == base;
      scaled.epsilon = cfg.epsilon * k;
      literal_all = literal_all && hazard::Vote(scores, scaled).winners == base;
    }
    unchanged += all;
    literal_unchanged += literal_all;
  }
  Report("joint-scaling argmax invariance", unchanged == kScalingInstances,
         Format("%d/%d unchanged with noise sd scaled by k (epsilon/k); "
                "epsilon*k keeps %d/%d",
                unchanged, kScalingInstances, literal_unchanged, kScalingInstances));
}

void CaptionOracle() {
  std::mt19937_64 rng(505);
  const std::vector<std::string> texts{"a dog", "A  Dog", "a deer crossing", "truck", "b",
                                       "a cat", "Truck "};
  std::uniform_int_distribution<int> count(1, 20);
  std::uniform_int_distribution<int> area(1, 4);
  int agree = 0;
  int ties = 0;
  for (int i = 0; i < kCaptionSets; ++i) {
    // At most five distinct texts per set.
    std::vector<std::string> pool = texts;
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(5);
    std::vector<CaptionCandidate> cands;
    caption::AreaByFrame areas;
    const int n = count(rng);
    for (int f = 0; f < n; ++f) {
      areas[f] = 25.0 * area(rng);
      cands.push_back({"v", 1, f, "m", pool[rng() % pool.size()]});
    }
    std::vector<std::pair<std::string, double>> table;
    for (const auto& c : cands) {
      std::string key;
      for (const auto& w : SplitWhitespace(ToLower(c.text))) key += (key.empty() ? "" : " ") + w;
      auto it = std::find_if(table.begin(), table.end(),
                             [&](const auto& e) { return e.first == key; });
      if (it == table.end()) table.emplace_back(key, 0.0);
      it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == key; });
      it->second += areas.at(c.frame);
    }
    double top = -1;
    for (const auto& e : table) top = std::max(top, e.second);
    std::string expected;
    int at_top = 0;
    for (const auto& e : table) {
      if (e.second == top) {
        ++at_top;
        if (expected.empty() || e.first < expected) expected = e.first;
      }
    }
    ties += at_top > 1;
    if (caption::AggregateCaptions(cands, areas) == expected) ++agree;
  }
  Report("area-vote caption oracle", agree == kCaptionSets && ties > 0,
         Format("%d/%d sets agree (%d with tied maxima)", agree, kCaptionSets, ties));
}

void CaptionLengthContract() {
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<int> words(0, 25);
  std::uniform_int_distribution<int> len(1, 40);
  std::uniform_int_distribution<int> letter('a', 'z');
  std::uniform_real_distribution<double> score(0, 100);
  const caption::WordConfig cfg;
  int ok = 0;
  std::size_t longest = 0;
  for (int i = 0; i < kFuzzedMaps; ++i) {
    caption::CaptionTable table;
    for (int k = words(rng); k > 0; --k) {
      std::string w;
      for (int c = len(rng); c > 0; --c) w += char(letter(rng));
      // Coarse scores so that ties occur.
      table[w] = std::floor(score(rng) / 10);
    }
    const std::string out = caption::BuildCaption(table, cfg);
    longest = std::max(longest, out.size());
    bool words_known = true;
    for (const auto& w : SplitWhitespace(out)) {
      bool found = table.contains(w);
      // A single over-long word is emitted as its prefix.
      for (const auto& [key, s] : table) {
        found = found || (key.size() > std::size_t(cfg.char_limit) && key.starts_with(w));
      }
      words_known = words_known && found;
    }
    if (out.size() <= std::size_t(cfg.char_limit) && words_known) ++ok;
  }
  Report("35-char caption contract", ok == kFuzzedMaps,
         Format("%d/%d maps within %d chars with known words (longest %zu)", ok, kFuzzedMaps,
                cfg.char_limit, longest));
}

void MetricChecks() {
  using V = std::vector<std::string>;
  struct Case {
    const char* name;
    double got;
    double want;
  };
  std::vector<bool> truth(100, false);
  for (int f = 50; f < 100; ++f) truth[std::size_t(f)] = true;
  std::vector<bool> complement;
  for (bool b : truth) complement.push_back(!b);

  // Two-video run with per-video hazard scores 1.0 and 0.5.
  GroundTruth gt;
  Predictions pred;
  for (const std::string id : {"a", "b"}) {
    VideoTruth vt;
    vt.frame_count = 2;
    std::vector<FramePrediction> frames(2);
    for (int f = 0; f < 2; ++f) {
      vt.frames[f] = {{7}, {"a dog"}};
      frames[std::size_t(f)].hazards = {{id == "a" || f == 0 ? 7 : 8, "a dog"}};
    }
    gt[id] = vt;
    pred[id] = frames;
  }
  const auto run = metrics::ScoreRun(pred, gt);

  const std::vector<Case> cases{
      {"hazard {3,7} vs {3}", metrics::ScoreHazardFrame({3, 7}, {3}), 0.5},
      {"hazard {3} vs {3}", metrics::ScoreHazardFrame({3}, {3}), 1.0},
      {"hazard {} vs {3}", metrics::ScoreHazardFrame({}, {3}), 0.0},
      {"reaction identical", metrics::ScoreReaction(truth, truth), 1.0},
      {"reaction all false", metrics::ScoreReaction(std::vector<bool>(100, false), truth), 0.5},
      {"reaction complement", metrics::ScoreReaction(complement, truth), 0.0},
      {"caption dog", metrics::ScoreCaptionFrame(V{"dog"}, V{"a dog crossing"}), 1.0},
      {"caption cat", metrics::ScoreCaptionFrame(V{"cat"}, V{"a dog crossing"}), 0.0},
      {"caption dog,cat", metrics::ScoreCaptionFrame(V{"dog", "cat"}, V{"a dog crossing"}), 0.5},
      {"run macro hazard", run.aggregate.hazard, 0.75},
  };
  int ok = 0;
  std::string bad;
  for (const Case& c : cases) {
    if (std::abs(c.got - c.want) <= kMetricTolerance) {
      ++ok;
    } else {
      bad += Format(" [%s: %.17g != %.17g]", c.name, c.got, c.want);
    }
  }
  const bool exact = metrics::ScoreHazardFrame({3, 7}, {3}) == 0.5 &&
                     metrics::ScoreReaction(complement, truth) == 0.0;
  Report("metric formula checks", ok == int(cases.size()) && exact,
         Format("%d/%zu hand values within %.0e", ok, cases.size(), kMetricTolerance) + bad);
}

void SoundDetector() {
  const Rational fps{30, 1};
  const reaction::SoundConfig cfg;
  int in_window = 0;
  std::string frames;
  for (int seed = 1; seed <= kSoundRealizations; ++seed) {
    std::mt19937_64 rng(std::uint64_t(seed) * 7919);
    std::uniform_real_distribution<double> noise(-0.05, 0.05);
    std::uniform_real_distribution<double> burst(-0.9, 0.9);
    AudioTrack a;
    a.sample_rate = 16000;
    a.samples.resize(8 * 16000);
    for (float& s : a.samples) s = float(noise(rng));
    for (int i = 4 * 16000; i < 4 * 16000 + 16000 / 5; ++i) a.samples[std::size_t(i)] = float(burst(rng));
    const auto f = reaction::SoundAnomaly(a, fps, cfg);
    if (f && *f >= kBurstFrameLo && *f <= kBurstFrameHi) ++in_window;
    frames += f ? Format(" %d", *f) : std::string(" none");
  }
  AudioTrack silence;
  silence.sample_rate = 16000;
  silence.samples.assign(8 * 16000, 0.0f);
  AudioTrack tone = silence;
  for (std::size_t i = 0; i < tone.samples.size(); ++i) {
    tone.samples[i] = float(0.5 * std::sin(2 * std::numbers::pi * 440.0 * double(i) / 16000));
  }
  const bool silent = !reaction::SoundAnomaly(silence, fps, cfg);
  const bool tone_silent = !reaction::SoundAnomaly(tone, fps, cfg);
  Report("sound detector", in_window == kSoundRealizations && silent && tone_silent,
         Format("burst %d/%d in [%d,%d]; silence %s; tone %s", in_window, kSoundRealizations,
                kBurstFrameLo, kBurstFrameHi, silent ? "none" : "FIRED",
                tone_silent ? "none" : "FIRED"));
}

void BaselineComparison() {
  const auto videos = fixture::GenerateFixture(1, kFixtureVideos);
  const GroundTruth truth = fixture::TruthOf(videos);
  const auto result = pipeline::RunPipeline(fixture::ToInputs(videos), pipeline::PipelineConfig{});

  Predictions baseline = result.predictions;
  for (const auto& v : videos) {
    const auto pick = hazard::BaselineCenter(v.annotations);
    auto& frames = baseline.at(v.annotations.video_id);
    for (int f = 0; f < int(frames.size()); ++f) {
      frames[std::size_t(f)].hazards.clear();
      if (pick && v.annotations.tracks.at(*pick).at_frame(f)) {
        frames[std::size_t(f)].hazards.push_back({*pick, ""});
      }
    }
  }
  const double ensemble = metrics::ScoreRun(result.predictions, truth).aggregate.hazard;
  const double center = metrics::ScoreRun(baseline, truth).aggregate.hazard;
  Report("ensemble beats center baseline", ensemble > center,
         Format("hazard score ensemble %.4f vs baseline %.4f", ensemble, center));
}

}  // namespace

int main() {
  FixtureClosedLoop();
  SpeedFidelity();
  ZeroNoiseLimit();
  EnsembleDeterminism();
  JointScaling();
  CaptionOracle();
  CaptionLengthContract();
  MetricChecks();
  SoundDetector();
  BaselineComparison();
  std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
