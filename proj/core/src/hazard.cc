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

#include "dashcam/hazard.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "dashcam/error.h"
#include "dashcam/text.h"

namespace dashcam::hazard {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform on [0, 1) from the top 53 bits.
double Uniform01(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

Point NetDisplacement(const Track& track) {
  const Point a = track.observations.front().box.center();
  const Point b = track.observations.back().box.center();
  return {b.x - a.x, b.y - a.y};
}

double Median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

bool OnSegment(const Point& p, const Point& a, const Point& b) {
  const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
  if (std::abs(cross) > 1e-12) return false;
  return p.x >= std::min(a.x, b.x) - 1e-12 && p.x <= std::max(a.x, b.x) + 1e-12 &&
         p.y >= std::min(a.y, b.y) - 1e-12 && p.y <= std::max(a.y, b.y) + 1e-12;
}

}  // namespace

std::set<std::string> DefaultDenylist() {
  return {"car",        "traffic light", "truck",     "bus",
          "van",        "taxi",          "minivan",   "pickup truck",
          "stop sign",  "street sign",   "traffic sign", "parking meter",
          "streetlight"};
}

Polygon DefaultZone() {
  return {{0.2, 1.0}, {0.4, 0.5}, {0.6, 0.5}, {0.8, 1.0}};
}

void EnsembleConfig::Validate() const {
  bool any_positive = false;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ConfigError("ensemble weights must be finite and non-negative");
    }
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive) throw ConfigError("at least one ensemble weight must be > 0");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (num_draws < 1) throw ConfigError("num_draws must be >= 1");
  if (top_k < 1) throw ConfigError("top_k must be >= 1");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("tau must be positive");
  if (zone.size() < 3) throw ConfigError("zone polygon needs at least 3 vertices");
}

double LabelDenylistScore(const Track& track,
                          std::span<const LabelCandidate> labels,
                          const std::set<std::string>& denylist) {
  const LabelCandidate* best = nullptr;
  for (const LabelCandidate& l : labels) {
    if (l.video_id != track.video_id || l.track_id != track.track_id) continue;
    if (best == nullptr || l.confidence > best->confidence ||
        (l.confidence == best->confidence && l.label < best->label)) {
      best = &l;
    }
  }
  if (best == nullptr) return 0.5;
  const std::string label = NormalizeText(best->label);
  for (const std::string& entry : denylist) {
    if (NormalizeText(entry) == label) return 0.0;
  }
  return 1.0;
}

double CenterProximityScore(const Track& track, int frame_width,
                            int frame_height) {
  const double cx = frame_width / 2.0;
  const double cy = frame_height / 2.0;
  double total = 0.0;
  for (const Observation& o : track.observations) {
    const Point c = o.box.center();
    total += std::hypot(c.x - cx, c.y - cy);
  }
  const double mean = total / double(track.observations.size());
  return std::max(0.0, 1.0 - mean / std::hypot(cx, cy));
}

Point EgoMotionProxy(const VideoAnnotations& video) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [id, track] : video.tracks) {
    const Point d = NetDisplacement(track);
    xs.push_back(d.x);
    ys.push_back(d.y);
  }
  if (xs.empty()) return {};
  return {Median(std::move(xs)), Median(std::move(ys))};
}

double DirectionDivergenceScore(const Track& track,
                                const VideoAnnotations& video) {
  if (track.observations.size() < 2) return 0.5;
  const Point object = NetDisplacement(track);
  const Point ego = EgoMotionProxy(video);
  if (std::hypot(object.x, object.y) < 1e-6 || std::hypot(ego.x, ego.y) < 1e-6) {
    return 0.5;
  }
  const double cross = object.x * ego.y - object.y * ego.x;
  const double dot = object.x * ego.x + object.y * ego.y;
  return std::atan2(std::abs(cross), dot) / std::numbers::pi;
}

bool PointInPolygon(const Point& p, const Polygon& polygon) {
  if (polygon.size() < 3) throw ConfigError("zone polygon needs at least 3 vertices");
  bool inside = false;
  for (std::size_t i = 0, j = polygon.size() - 1; i < polygon.size(); j = i++) {
    const Point& a = polygon[i];
    const Point& b = polygon[j];
    if (OnSegment(p, a, b)) return true;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

double TrafficZoneScore(const Track& track, const Polygon& zone,
                        int frame_width, int frame_height) {
  if (zone.size() < 3) throw ConfigError("zone polygon needs at least 3 vertices");
  std::size_t inside = 0;
  for (const Observation& o : track.observations) {
    const Point c = o.box.center();
    if (PointInPolygon({c.x / frame_width, c.y / frame_height}, zone)) ++inside;
  }
  return double(inside) / double(track.observations.size());
}

std::map<TrackId, double> PersistenceAreaScores(const VideoAnnotations& video) {
  std::vector<std::pair<double, TrackId>> salience;
  for (const auto& [id, track] : video.tracks) {
    double area = 0.0;
    for (const Observation& o : track.observations) area += o.box.area();
    const double n = double(track.observations.size());
    salience.emplace_back(n * (area / n), id);
  }
  std::sort(salience.begin(), salience.end());

  std::map<TrackId, double> scores;
  const std::size_t n = salience.size();
  if (n == 1) {
    scores[salience.front().second] = 1.0;
    return scores;
  }
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && salience[j + 1].first == salience[i].first) ++j;
    const double rank = (double(i) + double(j)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) {
      scores[salience[k].second] = 1.0 - rank / double(n - 1);
    }
    i = j + 1;
  }
  return scores;
}

double ReactionProximityScore(const Track& track,
                              const reaction::ReactionVerdict& verdict,
                              double tau) {
  if (!verdict.frame) return 0.5;
  const double gap = std::abs(double(track.first_frame() - *verdict.frame));
  return std::exp(-gap / tau);
}

WeakScores ComputeWeakScores(const VideoAnnotations& video,
                             std::span<const LabelCandidate> labels,
                             const reaction::ReactionVerdict& verdict,
                             const EnsembleConfig& cfg) {
  WeakScores scores;
  const auto persistence = PersistenceAreaScores(video);
  for (const auto& [id, track] : video.tracks) {
    if (track.kind != TrackKind::kChallengeObject) continue;
    scores[id] = {
        LabelDenylistScore(track, labels, cfg.denylist),
        CenterProximityScore(track, video.frame_width, video.frame_height),
        DirectionDivergenceScore(track, video),
        TrafficZoneScore(track, cfg.zone, video.frame_width, video.frame_height),
        persistence.at(id),
        ReactionProximityScore(track, verdict, cfg.tau),
    };
  }
  return scores;
}

std::map<TrackId, double> Combine(const WeakScores& scores,
                                  const WeightVector& weights) {
  std::map<TrackId, double> combined;
  for (const auto& [id, s] : scores) {
    double total = 0.0;
    for (std::size_t i = 0; i < kNumClassifiers; ++i) total += weights[i] * s[i];
    combined[id] = total;
  }
  return combined;
}

std::uint64_t DrawSeed(std::uint64_t seed, std::uint64_t draw) {
  return SplitMix64(seed ^ SplitMix64(draw));
}

WeightVector PerturbedWeights(const EnsembleConfig& cfg, std::uint64_t draw) {
  std::mt19937_64 engine(DrawSeed(cfg.seed, draw));
  const double sigma = 1.0 / cfg.epsilon;
  WeightVector w = cfg.weights;
  // Box-Muller; each pair of uniforms yields two normals.
  for (std::size_t i = 0; i < kNumClassifiers; i += 2) {
    const double u1 = 1.0 - Uniform01(engine);
    const double u2 = Uniform01(engine);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    w[i] = std::max(0.0, w[i] + sigma * r * std::cos(theta));
    if (i + 1 < kNumClassifiers) {
      w[i + 1] = std::max(0.0, w[i + 1] + sigma * r * std::sin(theta));
    }
  }
  return w;
}

std::vector<TrackId> TopK(const std::map<TrackId, double>& combined, int k) {
  std::vector<std::pair<double, TrackId>> ranked;
  ranked.reserve(combined.size());
  for (const auto& [id, score] : combined) ranked.emplace_back(score, id);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<TrackId> out;
  for (std::size_t i = 0; i < ranked.size() && i < std::size_t(k); ++i) {
    out.push_back(ranked[i].second);
  }
  return out;
}

HazardBallot Vote(const WeakScores& scores, const EnsembleConfig& cfg,
                  int workers) {
  cfg.Validate();
  HazardBallot ballot;
  if (scores.empty()) return ballot;
  ballot.base_combined = Combine(scores, cfg.weights);
  for (const auto& [id, s] : scores) ballot.votes[id] = 0;

  const int threads = std::clamp(workers, 1, cfg.num_draws);
  std::vector<std::map<TrackId, int>> partial(static_cast<std::size_t>(threads));
  auto run = [&](int t) {
    auto& tally = partial[static_cast<std::size_t>(t)];
    for (int j = 1 + t; j <= cfg.num_draws; j += threads) {
      const auto combined = Combine(scores, PerturbedWeights(cfg, std::uint64_t(j)));
      for (TrackId id : TopK(combined, cfg.top_k)) ++tally[id];
    }
  };
  if (threads == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(run, t);
  }
  for (const auto& tally : partial) {
    for (const auto& [id, n] : tally) ballot.votes[id] += n;
  }

  std::vector<TrackId> ranked;
  for (const auto& [id, n] : ballot.votes) {
    if (n > 0) ranked.push_back(id);
  }
  std::sort(ranked.begin(), ranked.end(), [&](TrackId a, TrackId b) {
    const int va = ballot.votes.at(a);
    const int vb = ballot.votes.at(b);
    if (va != vb) return va > vb;
    const double ca = ballot.base_combined.at(a);
    const double cb = ballot.base_combined.at(b);
    if (ca != cb) return ca > cb;
    return a < b;
  });
  if (ranked.size() > std::size_t(cfg.top_k)) ranked.resize(std::size_t(cfg.top_k));
  ballot.winners = std::move(ranked);
  return ballot;
}

std::optional<TrackId> BaselineCenter(const VideoAnnotations& video) {
  std::optional<TrackId> best;
  double best_score = -1.0;
  for (const auto& [id, track] : video.tracks) {
    if (track.kind != TrackKind::kChallengeObject) continue;
    const double s =
        CenterProximityScore(track, video.frame_width, video.frame_height);
    if (s > best_score) {
      best = id;
      best_score = s;
    }
  }
  return best;
}

}  // namespace dashcam::hazard
