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

#include "dashcam/signal.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dashcam/error.h"

namespace dashcam::signal {

double FitSlope(std::span<const XY> points) {
  if (points.size() < 2) throw std::invalid_argument("degenerate regression");
  double mx = 0.0;
  double my = 0.0;
  for (const XY& p : points) {
    mx += p.x;
    my += p.y;
  }
  const double n = static_cast<double>(points.size());
  mx /= n;
  my /= n;
  // Centered sums; the raw-moment form cancels badly for large x offsets.
  double sxy = 0.0;
  double sxx = 0.0;
  for (const XY& p : points) {
    const double dx = p.x - mx;
    sxy += dx * (p.y - my);
    sxx += dx * dx;
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("degenerate regression");
  return sxy / sxx;
}

void PeakConfig::Validate() const {
  if (window < 1) throw ConfigError("peak window must be >= 1");
  if (!(z_threshold > 0.0) || !std::isfinite(z_threshold)) {
    throw ConfigError("peak z_threshold must be positive");
  }
  if (min_warmup < 2) throw ConfigError("peak min_warmup must be >= 2");
}

std::optional<Peak> DetectPeak(std::span<const Sample> series,
                               const PeakConfig& cfg) {
  const std::size_t window = static_cast<std::size_t>(cfg.window);
  for (std::size_t t = static_cast<std::size_t>(cfg.min_warmup);
       t < series.size(); ++t) {
    const std::size_t begin = t > window ? t - window : 0;
    const double n = static_cast<double>(t - begin);
    double mean = 0.0;
    for (std::size_t i = begin; i < t; ++i) mean += series[i].value;
    mean /= n;
    double var = 0.0;
    for (std::size_t i = begin; i < t; ++i) {
      const double d = series[i].value - mean;
      var += d * d;
    }
    const double sd = std::max(std::sqrt(var / n), kStdFloor);
    const double value = series[t].value;
    if (value > mean + cfg.z_threshold * sd) {
      return Peak{series[t].index, (value - mean) / sd};
    }
  }
  return std::nullopt;
}

}  // namespace dashcam::signal
