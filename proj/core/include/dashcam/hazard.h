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

#ifndef DASHCAM_HAZARD_H_
#define DASHCAM_HAZARD_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dashcam/model.h"
#include "dashcam/reaction.h"

// Hazard selection: six heuristic weak classifiers combined by a weighted
// sum, with the weights perturbed by Gaussian noise across many draws and
// the per-draw winners tallied as votes.
namespace dashcam::hazard {

inline constexpr std::size_t kNumClassifiers = 6;

// Classifier order: label denylist, center proximity, direction divergence,
// traffic zone, persistence/area, reaction proximity.
using ScoreVector = std::array<double, kNumClassifiers>;
using WeightVector = std::array<double, kNumClassifiers>;
using WeakScores = std::map<TrackId, ScoreVector>;

// Simple polygon in relative frame coordinates, [0,1]^2.
using Polygon = std::vector<Point>;

std::set<std::string> DefaultDenylist();
Polygon DefaultZone();

struct EnsembleConfig {
  WeightVector weights{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  // Noise scale knob; weight noise has standard deviation 1 / epsilon.
  double epsilon = 4.0;
  int num_draws = 101;
  int top_k = 1;
  std::uint64_t seed = 0;
  std::set<std::string> denylist = DefaultDenylist();
  Polygon zone = DefaultZone();
  double tau = 30.0;  // frames

  void Validate() const;
};

// 0 when the track's most confident label is denylisted, 1 when it is not,
// 0.5 when the track has no label. Only labels matching the track's
// (video_id, track_id) are considered.
double LabelDenylistScore(const Track& track,
                          std::span<const LabelCandidate> labels,
                          const std::set<std::string>& denylist);

double CenterProximityScore(const Track& track, int frame_width,
                            int frame_height);

// Component-wise median of every track's net centroid displacement; stands
// in for the ego vehicle's apparent motion.
Point EgoMotionProxy(const VideoAnnotations& video);

// Angle between the track's net displacement and the ego proxy, over pi.
double DirectionDivergenceScore(const Track& track,
                                const VideoAnnotations& video);

// Even-odd rule; points on an edge count as inside. Throws ConfigError for
// fewer than three vertices.
bool PointInPolygon(const Point& p, const Polygon& polygon);

double TrafficZoneScore(const Track& track, const Polygon& zone,
                        int frame_width, int frame_height);

// Ranks every track of the video by observation_count * mean_area,
// ascending, tied ranks averaged; the least salient scores 1.
std::map<TrackId, double> PersistenceAreaScores(const VideoAnnotations& video);

double ReactionProximityScore(const Track& track,
                              const reaction::ReactionVerdict& verdict,
                              double tau);

// Scores every challenge-object track of the video.
WeakScores ComputeWeakScores(const VideoAnnotations& video,
                             std::span<const LabelCandidate> labels,
                             const reaction::ReactionVerdict& verdict,
                             const EnsembleConfig& cfg);

std::map<TrackId, double> Combine(const WeakScores& scores,
                                  const WeightVector& weights);

struct HazardBallot {
  std::map<TrackId, double> base_combined;
  std::map<TrackId, int> votes;
  // Best first: most votes, then higher base_combined, then lower id.
  std::vector<TrackId> winners;

  friend bool operator==(const HazardBallot&, const HazardBallot&) = default;
};

// Seed of the generator for one draw.
std::uint64_t DrawSeed(std::uint64_t seed, std::uint64_t draw);

// Perturbed, zero-clamped weights of draw `draw` (1-based).
WeightVector PerturbedWeights(const EnsembleConfig& cfg, std::uint64_t draw);

// Tracks ranked by score descending, ties to the lower id; first k kept.
std::vector<TrackId> TopK(const std::map<TrackId, double>& combined, int k);

// Draws are split across `workers` threads; the ballot does not depend on
// the worker count.
HazardBallot Vote(const WeakScores& scores, const EnsembleConfig& cfg,
                  int workers = 1);

// Reference selector: the challenge object nearest the frame center on
// average, ties to the lower id.
std::optional<TrackId> BaselineCenter(const VideoAnnotations& video);

}  // namespace dashcam::hazard

#endif  // DASHCAM_HAZARD_H_
