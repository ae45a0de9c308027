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

#include "dashcam/io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <utility>

#include <nlohmann/json.hpp>

#include "dashcam/error.h"
#include "dashcam/text.h"

namespace dashcam {
namespace {

using nlohmann::json;

// Iterates non-blank lines of a JSONL stream, decoding each into an object.
template <typename Fn>
void ForEachJsonLine(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    json value;
    try {
      value = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(lineno, std::string("malformed JSON: ") + e.what());
    }
    if (!value.is_object()) throw ParseError(lineno, "expected a JSON object");
    fn(value, lineno);
  }
}

const json& Field(const json& obj, const char* key, std::size_t lineno) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw SchemaError(lineno, std::string("missing field \"") + key + "\"");
  }
  return *it;
}

std::string StringField(const json& obj, const char* key, std::size_t lineno) {
  const json& v = Field(obj, key, lineno);
  if (!v.is_string()) {
    throw SchemaError(lineno, std::string("field \"") + key + "\" must be a string");
  }
  return v.get<std::string>();
}

std::int64_t IntField(const json& obj, const char* key, std::size_t lineno) {
  const json& v = Field(obj, key, lineno);
  if (!v.is_number_integer()) {
    throw SchemaError(lineno, std::string("field \"") + key + "\" must be an integer");
  }
  return v.get<std::int64_t>();
}

double NumberField(const json& obj, const char* key, std::size_t lineno) {
  const json& v = Field(obj, key, lineno);
  if (!v.is_number()) {
    throw SchemaError(lineno, std::string("field \"") + key + "\" must be a number");
  }
  double d = v.get<double>();
  if (!std::isfinite(d)) {
    throw SchemaError(lineno, std::string("field \"") + key + "\" must be finite");
  }
  return d;
}

Rational ReduceRational(std::int64_t num, std::int64_t den) {
  std::int64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

Rational ParseFps(const json& v, std::size_t lineno) {
  std::int64_t num = 0;
  std::int64_t den = 1;
  if (v.is_number_integer()) {
    num = v.get<std::int64_t>();
  } else if (v.is_number()) {
    double d = v.get<double>();
    if (!std::isfinite(d)) throw SchemaError(lineno, "fps must be finite");
    num = std::llround(d * 1000.0);
    den = 1000;
  } else if (v.is_string()) {
    std::string s = v.get<std::string>();
    auto slash = s.find('/');
    try {
      std::size_t used = 0;
      num = std::stoll(s.substr(0, slash), &used);
      if (used != (slash == std::string::npos ? s.size() : slash)) {
        throw std::invalid_argument("trailing characters");
      }
      if (slash != std::string::npos) {
        std::string tail = s.substr(slash + 1);
        den = std::stoll(tail, &used);
        if (used != tail.size()) throw std::invalid_argument("trailing characters");
      }
    } catch (const std::logic_error&) {
      throw SchemaError(lineno, "fps string must look like \"30\" or \"30000/1001\"");
    }
  } else {
    throw SchemaError(lineno, "fps must be a number or a \"num/den\" string");
  }
  if (num <= 0 || den <= 0) throw SchemaError(lineno, "fps must be positive");
  return ReduceRational(num, den);
}

json FpsToJson(const Rational& fps) {
  if (fps.den == 1) return fps.num;
  return fps.ToString();
}

}  // namespace

TracksParseResult ParseTracks(std::istream& in) {
  TracksParseResult result;
  std::map<std::string, std::size_t> index;
  // (video index, track, frame) of every observation seen, dropped or not.
  std::set<std::tuple<std::size_t, TrackId, int>> seen;

  ForEachJsonLine(in, [&](const json& obj, std::size_t lineno) {
    std::string video = StringField(obj, "video", lineno);
    if (obj.contains("frame_count")) {
      if (index.count(video)) {
        throw SchemaError(lineno, "duplicate metadata for video \"" + video + "\"");
      }
      VideoAnnotations meta;
      meta.video_id = video;
      std::int64_t frames = IntField(obj, "frame_count", lineno);
      std::int64_t width = IntField(obj, "width", lineno);
      std::int64_t height = IntField(obj, "height", lineno);
      if (frames <= 0 || width <= 0 || height <= 0) {
        throw SchemaError(lineno, "frame_count, width and height must be positive");
      }
      meta.frame_count = static_cast<int>(frames);
      meta.frame_width = static_cast<int>(width);
      meta.frame_height = static_cast<int>(height);
      meta.fps = ParseFps(Field(obj, "fps", lineno), lineno);
      index.emplace(video, result.videos.size());
      result.videos.push_back(std::move(meta));
      return;
    }

    auto vit = index.find(video);
    if (vit == index.end()) {
      throw SchemaError(lineno, "observation for video \"" + video +
                                    "\" precedes its metadata line");
    }
    VideoAnnotations& meta = result.videos[vit->second];
    std::int64_t frame = IntField(obj, "frame", lineno);
    std::int64_t track_id = IntField(obj, "track_id", lineno);
    if (frame < 0 || frame >= meta.frame_count) {
      throw SchemaError(lineno, "frame " + std::to_string(frame) +
                                    " outside [0, frame_count)");
    }
    if (track_id < 0) throw SchemaError(lineno, "track_id must be non-negative");
    auto kind = ParseTrackKind(StringField(obj, "kind", lineno));
    if (!kind) {
      throw SchemaError(lineno, "kind must be challenge_object or traffic_scene");
    }
    const json& bbox = Field(obj, "bbox", lineno);
    if (!bbox.is_array() || bbox.size() != 4) {
      throw SchemaError(lineno, "bbox must be an array of 4 numbers");
    }
    double c[4];
    for (int i = 0; i < 4; ++i) {
      if (!bbox[i].is_number()) {
        throw SchemaError(lineno, "bbox must be an array of 4 numbers");
      }
      c[i] = bbox[i].get<double>();
      if (!std::isfinite(c[i])) throw SchemaError(lineno, "bbox must be finite");
    }
    if (c[2] < c[0] || c[3] < c[1]) {
      throw SchemaError(lineno, "bbox has x2 < x1 or y2 < y1");
    }
    if (!seen.emplace(vit->second, track_id, static_cast<int>(frame)).second) {
      throw SchemaError(lineno, "duplicate observation for video \"" + video +
                                    "\" track " + std::to_string(track_id) +
                                    " frame " + std::to_string(frame));
    }
    ++result.observations_read;

    BBox box{std::clamp(c[0], 0.0, double(meta.frame_width)),
             std::clamp(c[1], 0.0, double(meta.frame_height)),
             std::clamp(c[2], 0.0, double(meta.frame_width)),
             std::clamp(c[3], 0.0, double(meta.frame_height))};
    if (!box.valid()) {
      ++result.dropped_degenerate;
      result.warnings.push_back("line " + std::to_string(lineno) +
                                ": degenerate bbox dropped");
      return;
    }

    auto [tit, inserted] = meta.tracks.try_emplace(track_id);
    Track& track = tit->second;
    if (inserted) {
      track.video_id = video;
      track.track_id = track_id;
      track.kind = *kind;
    } else if (track.kind != *kind) {
      throw SchemaError(lineno, "track " + std::to_string(track_id) +
                                    " changes kind mid-stream");
    }
    track.observations.push_back({static_cast<int>(frame), box});
  });

  for (VideoAnnotations& video : result.videos) {
    for (auto& [id, track] : video.tracks) {
      std::sort(track.observations.begin(), track.observations.end(),
                [](const Observation& a, const Observation& b) {
                  return a.frame < b.frame;
                });
    }
  }
  return result;
}

void SerializeTracks(const std::vector<VideoAnnotations>& videos,
                     std::ostream& out) {
  for (const VideoAnnotations& video : videos) {
    json meta = {{"video", video.video_id},
                 {"frame_count", video.frame_count},
                 {"width", video.frame_width},
                 {"height", video.frame_height},
                 {"fps", FpsToJson(video.fps)}};
    out << meta.dump() << '\n';
    for (const auto& [id, track] : video.tracks) {
      for (const Observation& o : track.observations) {
        json line = {{"video", video.video_id},
                     {"frame", o.frame},
                     {"track_id", id},
                     {"kind", TrackKindName(track.kind)},
                     {"bbox", {o.box.x1, o.box.y1, o.box.x2, o.box.y2}}};
        out << line.dump() << '\n';
      }
    }
  }
}

CaptionsParseResult ParseCaptionCandidates(std::istream& in) {
  CaptionsParseResult result;
  ForEachJsonLine(in, [&](const json& obj, std::size_t lineno) {
    CaptionCandidate c;
    c.video_id = StringField(obj, "video", lineno);
    c.track_id = IntField(obj, "track_id", lineno);
    std::int64_t frame = IntField(obj, "frame", lineno);
    if (frame < 0) throw SchemaError(lineno, "frame must be non-negative");
    c.frame = static_cast<int>(frame);
    c.model_id = StringField(obj, "model", lineno);
    c.text = std::string(Trim(StringField(obj, "text", lineno)));
    if (c.text.empty()) {
      ++result.dropped_empty;
      result.warnings.push_back("line " + std::to_string(lineno) +
                                ": empty caption dropped");
      return;
    }
    result.candidates.push_back(std::move(c));
  });
  return result;
}

void SerializeCaptionCandidates(const std::vector<CaptionCandidate>& candidates,
                                std::ostream& out) {
  for (const CaptionCandidate& c : candidates) {
    json line = {{"video", c.video_id},
                 {"track_id", c.track_id},
                 {"frame", c.frame},
                 {"model", c.model_id},
                 {"text", c.text}};
    out << line.dump() << '\n';
  }
}

std::vector<LabelCandidate> ParseLabelCandidates(std::istream& in) {
  std::vector<LabelCandidate> labels;
  std::set<std::tuple<std::string, TrackId, std::string>> seen;
  ForEachJsonLine(in, [&](const json& obj, std::size_t lineno) {
    LabelCandidate l;
    l.video_id = StringField(obj, "video", lineno);
    l.track_id = IntField(obj, "track_id", lineno);
    l.label = StringField(obj, "label", lineno);
    l.confidence = NumberField(obj, "confidence", lineno);
    if (l.confidence < 0.0 || l.confidence > 1.0) {
      throw SchemaError(lineno, "confidence must lie in [0, 1]");
    }
    if (!seen.emplace(l.video_id, l.track_id, l.label).second) {
      throw SchemaError(lineno, "duplicate label \"" + l.label + "\" for track " +
                                    std::to_string(l.track_id));
    }
    labels.push_back(std::move(l));
  });
  return labels;
}

void SerializeLabelCandidates(const std::vector<LabelCandidate>& labels,
                              std::ostream& out) {
  for (const LabelCandidate& l : labels) {
    json line = {{"video", l.video_id},
                 {"track_id", l.track_id},
                 {"label", l.label},
                 {"confidence", l.confidence}};
    out << line.dump() << '\n';
  }
}

GroundTruth ParseGroundTruth(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(1, std::string("malformed ground truth JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("ground truth must be a JSON object");

  GroundTruth truth;
  for (const auto& [video_id, entry] : doc.items()) {
    auto where = [&](const std::string& what) {
      return SchemaError("ground truth video \"" + video_id + "\": " + what);
    };
    if (!entry.is_object()) throw where("entry must be an object");
    VideoTruth vt;
    if (auto it = entry.find("frame_count"); it != entry.end() && !it->is_null()) {
      if (!it->is_number_integer() || it->get<int>() <= 0) {
        throw where("frame_count must be a positive integer");
      }
      vt.frame_count = it->get<int>();
    }
    if (auto it = entry.find("reaction_frame"); it != entry.end() && !it->is_null()) {
      if (!it->is_number_integer() || it->get<int>() < 0) {
        throw where("reaction_frame must be a non-negative integer or null");
      }
      vt.reaction_frame = it->get<int>();
      if (vt.frame_count && *vt.reaction_frame >= *vt.frame_count) {
        throw where("reaction_frame must be < frame_count");
      }
    }
    if (auto it = entry.find("frames"); it != entry.end()) {
      if (!it->is_object()) throw where("frames must be an object");
      for (const auto& [key, frame] : it->items()) {
        int index = 0;
        try {
          std::size_t used = 0;
          index = std::stoi(key, &used);
          if (used != key.size() || index < 0) throw std::invalid_argument(key);
        } catch (const std::logic_error&) {
          throw where("frame key \"" + key + "\" is not a frame number");
        }
        if (vt.frame_count && index >= *vt.frame_count) {
          throw where("frame " + key + " outside frame_count");
        }
        FrameTruth ft;
        if (auto ids = frame.find("hazard_track_ids"); ids != frame.end()) {
          for (const json& id : *ids) {
            if (!id.is_number_integer()) throw where("hazard_track_ids must be integers");
            ft.hazard_track_ids.push_back(id.get<TrackId>());
          }
        }
        if (auto caps = frame.find("hazard_captions"); caps != frame.end()) {
          for (const json& c : *caps) {
            if (!c.is_string()) throw where("hazard_captions must be strings");
            ft.hazard_captions.push_back(c.get<std::string>());
          }
        }
        vt.frames.emplace(index, std::move(ft));
      }
    }
    truth.emplace(video_id, std::move(vt));
  }
  return truth;
}

void WriteGroundTruth(const GroundTruth& truth, std::ostream& out) {
  json doc = json::object();
  for (const auto& [video_id, vt] : truth) {
    json entry = json::object();
    entry["reaction_frame"] = vt.reaction_frame ? json(*vt.reaction_frame) : json();
    if (vt.frame_count) entry["frame_count"] = *vt.frame_count;
    json frames = json::object();
    for (const auto& [index, ft] : vt.frames) {
      frames[std::to_string(index)] = {{"hazard_track_ids", ft.hazard_track_ids},
                                       {"hazard_captions", ft.hazard_captions}};
    }
    entry["frames"] = std::move(frames);
    doc[video_id] = std::move(entry);
  }
  out << doc.dump() << '\n';
}

std::string CsvQuote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char ch : field) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

std::vector<std::vector<std::string>> ReadCsv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool any = false;
  char ch;
  while (in.get(ch)) {
    any = true;
    if (in_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field += '"';
        } else {
          in_quotes = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      in_quotes = true;
    } else if (ch == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (ch == '\r') {
      // Swallowed; a following '\n' terminates the record.
    } else if (ch == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else {
      field += ch;
    }
  }
  if (in_quotes) throw ParseError(rows.size() + 1, "unterminated quoted field");
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

void WriteSubmission(const Predictions& predictions, std::ostream& out,
                     const SubmissionOptions& options) {
  if (options.hazard_slots < 0) {
    throw std::invalid_argument("hazard slot count must be non-negative");
  }
  const int k = options.hazard_slots;
  out << "ID,Driver_State_Changed";
  for (int i = 0; i < k; ++i) {
    out << ",Hazard_Track_" << i << ",Hazard_Name_" << i;
  }
  out << '\n';
  const char* yes = options.lowercase_bools ? "true" : "True";
  const char* no = options.lowercase_bools ? "false" : "False";
  for (const auto& [video_id, frames] : predictions) {
    for (std::size_t f = 0; f < frames.size(); ++f) {
      const FramePrediction& p = frames[f];
      if (p.hazards.size() > static_cast<std::size_t>(k)) {
        throw std::invalid_argument(
            video_id + " frame " + std::to_string(f) + " has " +
            std::to_string(p.hazards.size()) + " hazards, more than " +
            std::to_string(k) + " slots");
      }
      out << CsvQuote(video_id + "_" + std::to_string(f)) << ','
          << (p.state_changed ? yes : no);
      for (int i = 0; i < k; ++i) {
        if (static_cast<std::size_t>(i) < p.hazards.size()) {
          out << ',' << p.hazards[i].track_id << ','
              << CsvQuote(p.hazards[i].caption);
        } else {
          out << ",,";
        }
      }
      out << '\n';
    }
  }
}

Predictions ParseSubmission(std::istream& in) {
  auto rows = ReadCsv(in);
  if (rows.empty()) throw SchemaError(1, "empty submission");
  const auto& header = rows.front();
  if (header.size() < 2 || header[0] != "ID" || header[1] != "Driver_State_Changed" ||
      header.size() % 2 != 0) {
    throw SchemaError(1, "header must start with ID,Driver_State_Changed followed "
                         "by Hazard_Track_i,Hazard_Name_i pairs");
  }
  const std::size_t slots = (header.size() - 2) / 2;
  for (std::size_t i = 0; i < slots; ++i) {
    if (header[2 + 2 * i] != "Hazard_Track_" + std::to_string(i) ||
        header[3 + 2 * i] != "Hazard_Name_" + std::to_string(i)) {
      throw SchemaError(1, "header column " + std::to_string(2 + 2 * i) +
                               " should be Hazard_Track_" + std::to_string(i));
    }
  }

  std::map<std::string, std::map<int, FramePrediction>> staged;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::size_t lineno = r + 1;
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != header.size()) {
      throw SchemaError(lineno, "expected " + std::to_string(header.size()) +
                                    " columns, found " + std::to_string(row.size()));
    }
    const std::string& id = row[0];
    auto us = id.rfind('_');
    int frame = -1;
    if (us != std::string::npos && us > 0) {
      try {
        std::size_t used = 0;
        std::string tail = id.substr(us + 1);
        frame = std::stoi(tail, &used);
        if (used != tail.size()) frame = -1;
      } catch (const std::logic_error&) {
        frame = -1;
      }
    }
    if (frame < 0) {
      throw SchemaError(lineno, "column ID: \"" + id + "\" is not <video>_<frame>");
    }
    FramePrediction p;
    std::string flag = ToLower(row[1]);
    if (flag == "true" || flag == "1") {
      p.state_changed = true;
    } else if (flag == "false" || flag == "0") {
      p.state_changed = false;
    } else {
      throw SchemaError(lineno, "column Driver_State_Changed: \"" + row[1] +
                                    "\" is not a boolean");
    }
    for (std::size_t i = 0; i < slots; ++i) {
      const std::string& track = row[2 + 2 * i];
      const std::string& name = row[3 + 2 * i];
      if (track.empty()) {
        if (!name.empty()) {
          throw SchemaError(lineno, "column Hazard_Name_" + std::to_string(i) +
                                        " set without a track id");
        }
        continue;
      }
      HazardPrediction h;
      try {
        std::size_t used = 0;
        h.track_id = std::stoll(track, &used);
        if (used != track.size()) throw std::invalid_argument(track);
      } catch (const std::logic_error&) {
        throw SchemaError(lineno, "column Hazard_Track_" + std::to_string(i) +
                                      ": \"" + track + "\" is not an integer");
      }
      h.caption = name;
      p.hazards.push_back(std::move(h));
    }
    std::string video = id.substr(0, us);
    if (!staged[video].emplace(frame, std::move(p)).second) {
      throw SchemaError(lineno, "duplicate row " + id);
    }
  }

  Predictions predictions;
  for (auto& [video, frames] : staged) {
    auto& out = predictions[video];
    for (auto& [frame, p] : frames) {
      if (frame != static_cast<int>(out.size())) {
        throw SchemaError("video \"" + video + "\" is missing frame " +
                          std::to_string(out.size()));
      }
      out.push_back(std::move(p));
    }
  }
  return predictions;
}

}  // namespace dashcam
