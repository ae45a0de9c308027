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

#ifndef DASHCAM_TESTS_TEST_UTIL_H_
#define DASHCAM_TESTS_TEST_UTIL_H_

#include <string>
#include <vector>

#include "dashcam/model.h"

namespace dashcam::testing {

// Track whose box of size w x h is centered on each given point, on
// consecutive frames starting at first_frame.
inline Track TrackFromCenters(const std::vector<Point>& centers,
                              int first_frame = 0, double w = 20.0,
                              double h = 20.0, TrackId id = 1,
                              TrackKind kind = TrackKind::kChallengeObject,
                              const std::string& video_id = "v0") {
  Track t;
  t.video_id = video_id;
  t.track_id = id;
  t.kind = kind;
  int f = first_frame;
  for (const Point& c : centers) {
    t.observations.push_back(
        {f++, {c.x - w / 2, c.y - h / 2, c.x + w / 2, c.y + h / 2}});
  }
  return t;
}

inline VideoAnnotations VideoWith(std::vector<Track> tracks, int width = 1280,
                                  int height = 720, int frame_count = 1000) {
  VideoAnnotations v;
  v.video_id = tracks.empty() ? "v0" : tracks.front().video_id;
  v.frame_count = frame_count;
  v.frame_width = width;
  v.frame_height = height;
  v.fps = {30, 1};
  for (Track& t : tracks) v.tracks[t.track_id] = std::move(t);
  return v;
}

}  // namespace dashcam::testing

#endif  // DASHCAM_TESTS_TEST_UTIL_H_
