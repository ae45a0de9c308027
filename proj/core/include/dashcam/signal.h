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

#ifndef DASHCAM_SIGNAL_H_
#define DASHCAM_SIGNAL_H_

#include <optional>
#include <span>
#include <vector>

namespace dashcam::signal {

struct XY {
  double x = 0.0;
  double y = 0.0;
};

// Ordinary least-squares slope a of y = a*x + b. Throws
// std::invalid_argument("degenerate regression") for fewer than two points
// or zero variance in x.
double FitSlope(std::span<const XY> points);

struct Sample {
  int index = 0;
  double value = 0.0;
};

// Strictly increasing indices, finite values.
using Series = std::vector<Sample>;

struct PeakConfig {
  int window = 30;           // trailing samples used for mean/std
  double z_threshold = 3.0;  // peak when value > mean + z * std
  int min_warmup = 5;        // first position eligible to fire

  // Throws ConfigError when out of range.
  void Validate() const;
};

struct Peak {
  int index = 0;  // Sample::index of the firing sample
  double zscore = 0.0;
};

// Floor applied to the trailing standard deviation.
inline constexpr double kStdFloor = 1e-9;

// First position t >= min_warmup whose value exceeds mean + z*std of the
// (up to) `window` samples strictly before t. Population std, floored at
// kStdFloor.
std::optional<Peak> DetectPeak(std::span<const Sample> series,
                               const PeakConfig& cfg);

}  // namespace dashcam::signal

#endif  // DASHCAM_SIGNAL_H_
