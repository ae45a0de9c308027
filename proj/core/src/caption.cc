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

#include "dashcam/caption.h"

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dashcam/error.h"
#include "dashcam/text.h"

namespace dashcam::caption {
namespace {

double AreaAt(const AreaByFrame& areas, const CaptionCandidate& c) {
  auto it = areas.find(c.frame);
  if (it == areas.end()) {
    throw std::invalid_argument("no bbox area for track " +
                                std::to_string(c.track_id) + " at frame " +
                                std::to_string(c.frame));
  }
  return it->second;
}

std::vector<std::string> Tokens(const std::string& text) {
  std::vector<std::string> tokens;
  for (const std::string& raw : SplitWhitespace(NormalizeText(text))) {
    std::string_view token = StripPunctuation(raw);
    if (!token.empty()) tokens.emplace_back(token);
  }
  return tokens;
}

}  // namespace

AreaByFrame AreasOf(const Track& track) {
  AreaByFrame areas;
  for (const Observation& o : track.observations) areas[o.frame] = o.box.area();
  return areas;
}

std::set<std::string> DefaultStopwords() {
  return {"a",     "an",   "the",  "and",  "or",    "but",  "of",    "in",
          "on",    "at",   "to",   "for",  "with",  "by",   "from",  "up",
          "down",  "over", "under", "is",  "are",   "was",  "were",  "be",
          "been",  "it",   "its",  "this", "that",  "these", "those", "there",
          "here",  "some", "into", "onto", "near",  "next", "as",    "while",
          "has",   "have", "his",  "her",  "their", "very", "out",   "off",
          "front", "side"};
}

std::set<std::string> DefaultOffstreetWords() {
  return {"animal", "dog",   "cat",    "deer",   "cow",   "horse",
          "sheep",  "goat",  "kangaroo", "bird", "duck",  "goose",
          "bear",   "moose", "fox",    "pig",    "tree",  "branch",
          "rock",   "boulder", "log"};
}

void WordConfig::Validate() const {
  if (!(meaningful_multiplier > 0.0) || !(stopword_multiplier > 0.0) ||
      !(offstreet_multiplier > 0.0)) {
    throw ConfigError("word multipliers must be positive");
  }
  if (char_limit < 1) throw ConfigError("char_limit must be >= 1");
}

CaptionTable AccumulateCaptions(std::span<const CaptionCandidate> candidates,
                                const AreaByFrame& areas) {
  CaptionTable table;
  for (const CaptionCandidate& c : candidates) {
    std::string key = NormalizeText(c.text);
    if (key.empty()) continue;
    table[std::move(key)] += AreaAt(areas, c);
  }
  return table;
}

std::optional<std::string> AggregateCaptions(
    std::span<const CaptionCandidate> candidates, const AreaByFrame& areas) {
  const CaptionTable table = AccumulateCaptions(candidates, areas);
  std::optional<std::string> best;
  double best_score = 0.0;
  // Map order is lexicographic, so strict > keeps the smallest tied key.
  for (const auto& [text, score] : table) {
    if (!best || score > best_score) {
      best = text;
      best_score = score;
    }
  }
  return best;
}

CaptionTable WordScores(std::span<const CaptionCandidate> candidates,
                        const AreaByFrame& areas, const WordConfig& cfg) {
  CaptionTable table;
  for (const CaptionCandidate& c : candidates) {
    const double area = AreaAt(areas, c);
    const auto tokens = Tokens(c.text);
    if (tokens.empty()) continue;
    const double credit =
        cfg.divide_area_by_tokens ? area / double(tokens.size()) : area;
    for (const std::string& token : tokens) table[token] += credit;
  }
  for (auto& [word, score] : table) {
    if (cfg.stopwords.count(word)) {
      score *= cfg.stopword_multiplier;
    } else {
      score *= cfg.meaningful_multiplier;
    }
    if (cfg.offstreet_words.count(word)) score *= cfg.offstreet_multiplier;
  }
  return table;
}

std::string BuildCaption(const CaptionTable& word_scores, const WordConfig& cfg) {
  std::vector<std::pair<std::string, double>> ranked(word_scores.begin(),
                                                     word_scores.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  const std::size_t limit = static_cast<std::size_t>(cfg.char_limit);
  std::string out;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const std::string& word = ranked[i].first;
    if (i == 0 && word.size() > limit) return Utf8Prefix(word, limit);
    const std::size_t needed = out.empty() ? word.size() : out.size() + 1 + word.size();
    if (needed > limit) continue;
    if (!out.empty()) out += ' ';
    out += word;
    if (out.size() + 2 > limit) break;  // no further word can fit
  }
  return out;
}

std::string CaptionTrack(std::span<const CaptionCandidate> candidates,
                         const AreaByFrame& areas, CaptionMode mode,
                         const WordConfig& cfg) {
  if (mode == CaptionMode::kAreaVote) {
    return AggregateCaptions(candidates, areas).value_or("");
  }
  return BuildCaption(WordScores(candidates, areas, cfg), cfg);
}

}  // namespace dashcam::caption
