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

#ifndef DASHCAM_IO_H_
#define DASHCAM_IO_H_

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "dashcam/model.h"

namespace dashcam {

struct TracksParseResult {
  // In order of their metadata lines.
  std::vector<VideoAnnotations> videos;
  std::size_t observations_read = 0;
  std::size_t dropped_degenerate = 0;
  std::vector<std::string> warnings;
};

// Tracks JSONL. A metadata line {"video","frame_count","width","height","fps"}
// must precede the observation lines {"video","frame","track_id","kind",
// "bbox":[x1,y1,x2,y2]} of that video. Boxes are clamped to the frame; boxes
// with zero extent after clamping are dropped and counted.
TracksParseResult ParseTracks(std::istream& in);

// Inverse of ParseTracks for valid annotations.
void SerializeTracks(const std::vector<VideoAnnotations>& videos,
                     std::ostream& out);

struct CaptionsParseResult {
  std::vector<CaptionCandidate> candidates;
  std::size_t dropped_empty = 0;
  std::vector<std::string> warnings;
};

CaptionsParseResult ParseCaptionCandidates(std::istream& in);
void SerializeCaptionCandidates(const std::vector<CaptionCandidate>& candidates,
                                std::ostream& out);

std::vector<LabelCandidate> ParseLabelCandidates(std::istream& in);
void SerializeLabelCandidates(const std::vector<LabelCandidate>& labels,
                              std::ostream& out);

// {video_id: {reaction_frame, frame_count?, frames: {frame: {
//   hazard_track_ids: [...], hazard_captions: [...]}}}}
GroundTruth ParseGroundTruth(std::istream& in);
void WriteGroundTruth(const GroundTruth& truth, std::ostream& out);

struct SubmissionOptions {
  int hazard_slots = 23;
  bool lowercase_bools = false;
};

// Submission CSV. Header
//   ID,Driver_State_Changed,Hazard_Track_0,Hazard_Name_0,...
// followed by one row per (video, frame), videos in lexicographic order.
// Throws std::invalid_argument when a frame carries more than
// hazard_slots hazards.
void WriteSubmission(const Predictions& predictions, std::ostream& out,
                     const SubmissionOptions& options = {});

// Reads a file written by WriteSubmission (any slot count). Frames must be
// contiguous from 0 within each video.
Predictions ParseSubmission(std::istream& in);

// RFC 4180 field quoting, and the matching record splitter. Exposed for
// tests and tooling.
std::string CsvQuote(const std::string& field);
std::vector<std::vector<std::string>> ReadCsv(std::istream& in);

}  // namespace dashcam

#endif  // DASHCAM_IO_H_
