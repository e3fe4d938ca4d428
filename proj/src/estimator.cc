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

#include "edgelight/estimator.h"

#include <cmath>
#include <numbers>

#include "edgelight/errors.h"

namespace edgelight {

std::array<double, kShBasisCount> ShBasis(const Vec3& d) {
  const double norm = Norm(d);
  if (!(std::abs(norm - 1.0) <= 1e-6)) {
    throw InvalidArgument("SH basis needs a unit direction");
  }
  const double x = d.x;
  const double y = d.y;
  const double z = d.z;
  return {
      0.282095,
      0.488603 * y,
      0.488603 * z,
      0.488603 * x,
      1.092548 * x * y,
      1.092548 * y * z,
      0.315392 * (3.0 * z * z - 1.0),
      1.092548 * x * z,
      0.546274 * (x * x - y * y),
  };
}

double ShRmse(const ShCoefficients& a, const ShCoefficients& b) {
  double sum = 0.0;
  for (int i = 0; i < kShValueCount; ++i) {
    const double diff = a.values[i] - b.values[i];
    sum += diff * diff;
  }
  return std::sqrt(sum / kShValueCount);
}

ShCoefficients ProjectSh(const UnitSphereCloud& cloud, const AnchorSet& anchors) {
  if (cloud.anchor_count() != anchors.count()) {
    throw InvalidArgument("cloud and anchor set sizes differ");
  }
  ShCoefficients sh;
  int observed = 0;
  for (int a = 0; a < cloud.anchor_count(); ++a) {
    const AnchorEntry& e = cloud[a];
    if (!e.initialized) continue;
    ++observed;
    const auto basis = ShBasis(anchors.direction(a));
    for (int c = 0; c < kShChannelCount; ++c) {
      const double radiance = e.color[c];
      for (int k = 0; k < kShBasisCount; ++k) sh.at(c, k) += radiance * basis[k];
    }
  }
  if (observed == 0) {
    throw InsufficientObservation("no initialized anchor to estimate from");
  }
  const double weight = 4.0 * std::numbers::pi / observed;
  for (double& v : sh.values) v *= weight;
  return sh;
}

std::shared_ptr<const Estimator> MakeEstimator(const std::string& name) {
  if (name == "analytic") return std::make_shared<AnalyticShProjector>();
  throw InvalidArgument("unknown estimator '" + name + "'");
}

}  // namespace edgelight
