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

#include "dashcam/model.h"

#include <algorithm>

namespace dashcam {

const char* TrackKindName(TrackKind kind) {
  switch (kind) {
    case TrackKind::kChallengeObject:
      return "challenge_object";
    case TrackKind::kTrafficScene:
      return "traffic_scene";
  }
  return "unknown";
}

std::optional<TrackKind> ParseTrackKind(const std::string& name) {
  if (name == "challenge_object") return TrackKind::kChallengeObject;
  if (name == "traffic_scene") return TrackKind::kTrafficScene;
  return std::nullopt;
}

const Observation* Track::at_frame(int frame) const {
  auto it = std::lower_bound(
      observations.begin(), observations.end(), frame,
      [](const Observation& o, int f) { return o.frame < f; });
  if (it == observations.end() || it->frame != frame) return nullptr;
  return &*it;
}

std::string Rational::ToString() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

}  // namespace dashcam
