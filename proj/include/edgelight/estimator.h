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

#ifndef EDGELIGHT_ESTIMATOR_H_
#define EDGELIGHT_ESTIMATOR_H_

#include <array>
#include <memory>
#include <span>
#include <string>

#include "edgelight/sampling.h"
#include "edgelight/sphere_geometry.h"
#include "edgelight/vec3.h"

namespace edgelight {

inline constexpr int kShBasisCount = 9;
inline constexpr int kShChannelCount = 3;
inline constexpr int kShValueCount = kShBasisCount * kShChannelCount;

// Degree-2 real SH radiance coefficients. Channel-major: R's nine basis
// coefficients in (l, m) order (0,0) (1,-1) (1,0) (1,1) (2,-2) .. (2,2), then
// G, then B.
struct ShCoefficients {
  std::array<double, kShValueCount> values{};

  double& at(int channel, int basis) { return values[channel * kShBasisCount + basis]; }
  double at(int channel, int basis) const {
    return values[channel * kShBasisCount + basis];
  }

  friend bool operator==(const ShCoefficients&, const ShCoefficients&) = default;
};

// Y_lm for l <= 2 in the canonical basis order. Throws InvalidArgument unless
// |direction| is within 1e-6 of one.
std::array<double, kShBasisCount> ShBasis(const Vec3& direction);

// Root mean square over all 27 values.
double ShRmse(const ShCoefficients& a, const ShCoefficients& b);

// Turns an observation into lighting. Implementations must be deterministic,
// accept partially initialized clouds and tolerate concurrent calls.
class Estimator {
 public:
  virtual ~Estimator() = default;
  virtual std::string name() const = 0;
  virtual ShCoefficients Estimate(const UnitSphereCloud& cloud,
                                  const AnchorSet& anchors) const = 0;
};

// Monte Carlo projection of the observed anchor colors onto the SH basis,
// weighting each initialized anchor by 4pi / M. Distances are not used.
// Throws InsufficientObservation if nothing is initialized.
ShCoefficients ProjectSh(const UnitSphereCloud& cloud, const AnchorSet& anchors);

class AnalyticShProjector final : public Estimator {
 public:
  std::string name() const override { return "analytic"; }
  ShCoefficients Estimate(const UnitSphereCloud& cloud,
                          const AnchorSet& anchors) const override {
    return ProjectSh(cloud, anchors);
  }
};

// Looks an estimator up by its name(); throws InvalidArgument if unknown.
std::shared_ptr<const Estimator> MakeEstimator(const std::string& name);

}  // namespace edgelight

#endif  // EDGELIGHT_ESTIMATOR_H_
