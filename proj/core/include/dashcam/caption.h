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

#ifndef DASHCAM_CAPTION_H_
#define DASHCAM_CAPTION_H_

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>

#include "dashcam/model.h"

namespace dashcam::caption {

// text (or word) -> accumulated score. Ordered, so iteration and
// tie-breaking are deterministic.
using CaptionTable = std::map<std::string, double>;

// frame -> bbox area of the captioned track.
using AreaByFrame = std::map<int, double>;

AreaByFrame AreasOf(const Track& track);

std::set<std::string> DefaultStopwords();
std::set<std::string> DefaultOffstreetWords();

struct WordConfig {
  std::set<std::string> stopwords = DefaultStopwords();
  std::set<std::string> offstreet_words = DefaultOffstreetWords();
  double meaningful_multiplier = 2.0;
  double stopword_multiplier = 0.5;
  double offstreet_multiplier = 2.0;
  int char_limit = 35;
  // Split each candidate's area evenly over its tokens instead of crediting
  // every token with the full area.
  bool divide_area_by_tokens = false;

  void Validate() const;
};

// Adds each candidate's bbox area to the entry of its normalized text
// (lowercased, whitespace collapsed). Throws std::invalid_argument when a
// candidate's frame has no area.
CaptionTable AccumulateCaptions(std::span<const CaptionCandidate> candidates,
                                const AreaByFrame& areas);

// Highest-scoring normalized text, ties to the lexicographically smallest;
// nullopt for no candidates.
std::optional<std::string> AggregateCaptions(
    std::span<const CaptionCandidate> candidates, const AreaByFrame& areas);

// Word-level variant of AccumulateCaptions with stop-word, meaningful-word
// and off-street multipliers applied after accumulation.
CaptionTable WordScores(std::span<const CaptionCandidate> candidates,
                        const AreaByFrame& areas, const WordConfig& cfg);

// Greedy fill by score (ties lexicographic), skipping words that would
// overflow char_limit. Never longer than char_limit bytes.
std::string BuildCaption(const CaptionTable& word_scores, const WordConfig& cfg);

enum class CaptionMode { kAreaVote, kWordLevel };

std::string CaptionTrack(std::span<const CaptionCandidate> candidates,
                         const AreaByFrame& areas, CaptionMode mode,
                         const WordConfig& cfg);

}  // namespace dashcam::caption

#endif  // DASHCAM_CAPTION_H_
