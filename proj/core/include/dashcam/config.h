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

#ifndef DASHCAM_CONFIG_H_
#define DASHCAM_CONFIG_H_

#include <filesystem>
#include <istream>
#include <optional>
#include <string>

#include "dashcam/caption.h"
#include "dashcam/hazard.h"
#include "dashcam/pipeline.h"

namespace dashcam::config {

// Input and output locations of a run. Empty paths are unset.
struct RunPaths {
  std::filesystem::path tracks;
  std::filesystem::path audio_dir;
  std::filesystem::path captions;
  std::filesystem::path labels;
  std::filesystem::path out;
  std::filesystem::path truth;
};

struct RunConfig {
  RunPaths paths;
  pipeline::PipelineConfig pipeline;
};

// Field names follow the JSON documents described in the README. Unknown
// keys are rejected; absent keys keep the current value of `base`. All
// functions throw ConfigError.
hazard::EnsembleConfig ParseEnsembleConfig(std::istream& in,
                                           hazard::EnsembleConfig base = {});
caption::WordConfig ParseWordConfig(std::istream& in,
                                    caption::WordConfig base = {});
// Checks keys and types only; call pipeline.Validate() once overrides are in.
RunConfig ParseRunConfig(std::istream& in, RunConfig base = {});
RunConfig LoadRunConfig(const std::filesystem::path& path, RunConfig base = {});

std::optional<pipeline::ReactionMode> ParseReactionMode(const std::string& s);
std::optional<caption::CaptionMode> ParseCaptionMode(const std::string& s);

}  // namespace dashcam::config

#endif  // DASHCAM_CONFIG_H_
