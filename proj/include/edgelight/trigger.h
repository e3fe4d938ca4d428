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

#ifndef EDGELIGHT_TRIGGER_H_
#define EDGELIGHT_TRIGGER_H_

#include <vector>

#include "edgelight/sampling.h"
#include "edgelight/sphere_geometry.h"

namespace edgelight {

struct TriggerConfig {
  double theta = 0.6;  // fire when a pooled value exceeds this, (0, 1]
  int window = 4;      // anchors per pooling window, self included

  // Throws InvalidArgument if theta or window is out of range for `anchors`.
  void Validate(const AnchorSet& anchors) const;
};

struct TriggerDecision {
  bool fire = false;
  double max_pooled = 0.0;
};

// Per-anchor color change in [0, 1]: 0 when neither side is observed, 1 when
// exactly one side is, otherwise the per-channel mean squared difference.
std::vector<double> AnchorDifference(const UnitSphereCloud& temp,
                                     const UnitSphereCloud& persistent);

// Averages AnchorDifference over each anchor and its window-1 nearest
// neighbors and fires iff the largest average is strictly above theta.
TriggerDecision ShouldTrigger(const UnitSphereCloud& temp,
                              const UnitSphereCloud& persistent,
                              const AnchorSet& anchors,
                              const TriggerConfig& config);

}  // namespace edgelight

#endif  // EDGELIGHT_TRIGGER_H_
