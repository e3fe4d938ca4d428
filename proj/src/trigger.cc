// Copyright 2026 The Edgelight Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "edgelight/trigger.h"

#include <algorithm>
#include <string>

#include "edgelight/errors.h"

namespace edgelight {

void TriggerConfig::Validate(const AnchorSet& anchors) const {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw InvalidArgument("theta must lie in (0, 1]");
  }
  if (window < 1 || window > anchors.neighbor_capacity() + 1) {
    throw InvalidArgument("window must lie in [1, " +
                          std::to_string(anchors.neighbor_capacity() + 1) + "]");
  }
}

std::vector<double> AnchorDifference(const UnitSphereCloud& temp,
                                     const UnitSphereCloud& persistent) {
  if (temp.anchor_count() != persistent.anchor_count()) {
    throw InvalidArgument("clouds have different anchor counts");
  }
  std::vector<double> diff(temp.anchor_count(), 0.0);
  for (int a = 0; a < temp.anchor_count(); ++a) {
    const AnchorEntry& t = temp[a];
    const AnchorEntry& p = persistent[a];
    if (t.initialized != p.initialized) {
      diff[a] = 1.0;
    } else if (t.initialized) {
      double sum = 0.0;
      for (int c = 0; c < 3; ++c) {
        const double d = static_cast<double>(t.color[c]) - p.color[c];
        sum += d * d;
      }
      diff[a] = sum / 3.0;
    }
  }
  return diff;
}

TriggerDecision ShouldTrigger(const UnitSphereCloud& temp,
                              const UnitSphereCloud& persistent,
                              const AnchorSet& anchors,
                              const TriggerConfig& config) {
  config.Validate(anchors);
  if (temp.anchor_count() != anchors.count()) {
    throw InvalidArgument("cloud does not match the anchor set");
  }
  const std::vector<double> diff = AnchorDifference(temp, persistent);
  const int extra = config.window - 1;
  TriggerDecision decision;
  for (int a = 0; a < anchors.count(); ++a) {
    double sum = diff[a];
    const auto neighbors = anchors.neighbors(static_cast<AnchorIndex>(a));
    for (int k = 0; k < extra; ++k) sum += diff[neighbors[k]];
    decision.max_pooled = std::max(decision.max_pooled, sum / config.window);
  }
  decision.fire = decision.max_pooled > config.theta;
  return decision;
}

}  // namespace edgelight
