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

#include "dashcam/config.h"

#include <fstream>
#include <initializer_list>

#include <nlohmann/json.hpp>

#include "dashcam/error.h"

namespace dashcam::config {
namespace {

using nlohmann::json;

json ParseDocument(std::istream& in) {
  try {
    json doc = json::parse(in);
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    return doc;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config JSON: ") + e.what());
  }
}

void RejectUnknown(const json& obj, const std::string& where,
                   std::initializer_list<const char*> known) {
  for (const auto& [key, value] : obj.items()) {
    bool found = false;
    for (const char* k : known) found = found || key == k;
    if (!found) throw ConfigError(where + ": unknown key \"" + key + "\"");
  }
}

// Typed read of obj[key] into out when present.
template <typename T>
void Read(const json& obj, const char* key, T& out, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": \"" + key + "\" has the wrong type");
  }
}

void ReadPath(const json& obj, const char* key, std::filesystem::path& out) {
  std::string s;
  Read(obj, key, s, "paths");
  if (!s.empty()) out = s;
}

const json& Section(const json& obj, const char* key) {
  const json& section = obj.at(key);
  if (!section.is_object()) {
    throw ConfigError(std::string("\"") + key + "\" must be an object");
  }
  return section;
}

void ApplyPeak(const json& obj, signal::PeakConfig& peak, const std::string& where) {
  RejectUnknown(obj, where, {"window", "z_threshold", "min_warmup"});
  Read(obj, "window", peak.window, where);
  Read(obj, "z_threshold", peak.z_threshold, where);
  Read(obj, "min_warmup", peak.min_warmup, where);
}

void ApplyEnsemble(const json& obj, hazard::EnsembleConfig& cfg) {
  const std::string where = "ensemble";
  RejectUnknown(obj, where, {"weights", "epsilon", "num_draws", "top_k", "seed",
                             "denylist", "zone", "tau"});
  if (auto it = obj.find("weights"); it != obj.end()) {
    std::vector<double> w;
    Read(obj, "weights", w, where);
    if (w.size() != hazard::kNumClassifiers) {
      throw ConfigError("ensemble: weights must have 6 entries");
    }
    std::copy(w.begin(), w.end(), cfg.weights.begin());
  }
  Read(obj, "epsilon", cfg.epsilon, where);
  Read(obj, "num_draws", cfg.num_draws, where);
  Read(obj, "top_k", cfg.top_k, where);
  Read(obj, "seed", cfg.seed, where);
  Read(obj, "denylist", cfg.denylist, where);
  Read(obj, "tau", cfg.tau, where);
  if (auto it = obj.find("zone"); it != obj.end()) {
    std::vector<std::array<double, 2>> vertices;
    Read(obj, "zone", vertices, where);
    cfg.zone.clear();
    for (const auto& v : vertices) cfg.zone.push_back({v[0], v[1]});
  }
}

void ApplyWords(const json& obj, caption::WordConfig& cfg) {
  const std::string where = "words";
  RejectUnknown(obj, where,
                {"stopwords", "offstreet_words", "meaningful_multiplier",
                 "stopword_multiplier", "offstreet_multiplier", "char_limit",
                 "divide_area_by_tokens"});
  Read(obj, "stopwords", cfg.stopwords, where);
  Read(obj, "offstreet_words", cfg.offstreet_words, where);
  Read(obj, "meaningful_multiplier", cfg.meaningful_multiplier, where);
  Read(obj, "stopword_multiplier", cfg.stopword_multiplier, where);
  Read(obj, "offstreet_multiplier", cfg.offstreet_multiplier, where);
  Read(obj, "char_limit", cfg.char_limit, where);
  Read(obj, "divide_area_by_tokens", cfg.divide_area_by_tokens, where);
}

}  // namespace

std::optional<pipeline::ReactionMode> ParseReactionMode(const std::string& s) {
  if (s == "speed") return pipeline::ReactionMode::kSpeed;
  if (s == "sound") return pipeline::ReactionMode::kSound;
  if (s == "both") return pipeline::ReactionMode::kSpeedPlusSound;
  return std::nullopt;
}

std::optional<caption::CaptionMode> ParseCaptionMode(const std::string& s) {
  if (s == "alg2") return caption::CaptionMode::kAreaVote;
  if (s == "word35") return caption::CaptionMode::kWordLevel;
  return std::nullopt;
}

hazard::EnsembleConfig ParseEnsembleConfig(std::istream& in,
                                           hazard::EnsembleConfig base) {
  ApplyEnsemble(ParseDocument(in), base);
  base.Validate();
  return base;
}

caption::WordConfig ParseWordConfig(std::istream& in, caption::WordConfig base) {
  ApplyWords(ParseDocument(in), base);
  base.Validate();
  return base;
}

RunConfig ParseRunConfig(std::istream& in, RunConfig base) {
  const json doc = ParseDocument(in);
  RejectUnknown(doc, "config",
                {"paths", "speed", "peak", "sound", "ensemble", "words",
                 "caption_mode", "reaction_mode", "workers", "hazard_slots",
                 "lowercase_bools"});
  pipeline::PipelineConfig& p = base.pipeline;

  if (doc.contains("paths")) {
    const json& paths = Section(doc, "paths");
    RejectUnknown(paths, "paths",
                  {"tracks", "audio_dir", "captions", "labels", "out", "truth"});
    ReadPath(paths, "tracks", base.paths.tracks);
    ReadPath(paths, "audio_dir", base.paths.audio_dir);
    ReadPath(paths, "captions", base.paths.captions);
    ReadPath(paths, "labels", base.paths.labels);
    ReadPath(paths, "out", base.paths.out);
    ReadPath(paths, "truth", base.paths.truth);
  }
  // "peak" applies to both detectors; the per-detector sections override it.
  if (doc.contains("peak")) {
    ApplyPeak(Section(doc, "peak"), p.speed.peak, "peak");
    p.sound.peak = p.speed.peak;
  }
  if (doc.contains("speed")) {
    const json& speed = Section(doc, "speed");
    RejectUnknown(speed, "speed", {"chunksize", "velocity", "peak"});
    Read(speed, "chunksize", p.speed.chunksize, "speed");
    std::string velocity;
    Read(speed, "velocity", velocity, "speed");
    if (velocity == "window") {
      p.speed.velocity = reaction::VelocityMode::kSlidingWindow;
    } else if (velocity == "prefix") {
      p.speed.velocity = reaction::VelocityMode::kPrefix;
    } else if (!velocity.empty()) {
      throw ConfigError("speed: velocity must be \"window\" or \"prefix\"");
    }
    if (speed.contains("peak")) ApplyPeak(Section(speed, "peak"), p.speed.peak, "speed.peak");
  }
  if (doc.contains("sound")) {
    const json& sound = Section(doc, "sound");
    RejectUnknown(sound, "sound", {"envelope_ms", "peak"});
    Read(sound, "envelope_ms", p.sound.envelope_ms, "sound");
    if (sound.contains("peak")) ApplyPeak(Section(sound, "peak"), p.sound.peak, "sound.peak");
  }
  if (doc.contains("ensemble")) ApplyEnsemble(Section(doc, "ensemble"), p.ensemble);
  if (doc.contains("words")) ApplyWords(Section(doc, "words"), p.words);

  std::string mode;
  Read(doc, "caption_mode", mode, "config");
  if (!mode.empty()) {
    auto parsed = ParseCaptionMode(mode);
    if (!parsed) throw ConfigError("caption_mode must be alg2 or word35");
    p.caption_mode = *parsed;
  }
  mode.clear();
  Read(doc, "reaction_mode", mode, "config");
  if (!mode.empty()) {
    auto parsed = ParseReactionMode(mode);
    if (!parsed) throw ConfigError("reaction_mode must be speed, sound or both");
    p.reaction_mode = *parsed;
  }
  Read(doc, "workers", p.workers, "config");
  Read(doc, "hazard_slots", p.submission.hazard_slots, "config");
  Read(doc, "lowercase_bools", p.submission.lowercase_bools, "config");
  return base;
}

RunConfig LoadRunConfig(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return ParseRunConfig(in, std::move(base));
}

}  // namespace dashcam::config
