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

#include "edgelight/sampling.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "edgelight/errors.h"

namespace edgelight {
namespace {

float Clamp01(float v) { return std::clamp(v, 0.0f, 1.0f); }

template <typename Assign>
UnitSphereCloud DepthCull(const PointCloud& cloud, int anchor_count,
                          Assign&& assign) {
  UnitSphereCloud out(anchor_count);
  std::vector<double> best(anchor_count,
                           std::numeric_limits<double>::infinity());
  std::vector<const Point*> chosen(anchor_count, nullptr);
  for (const Point& p : cloud.points) {
    const double dist = Norm(p.position);
    if (!(dist > 0.0)) continue;
    const AnchorIndex a = assign(p.position);
    // Strict comparison keeps the earliest point on equal distance.
    if (dist < best[a]) {
      best[a] = dist;
      chosen[a] = &p;
    }
  }
  for (int a = 0; a < anchor_count; ++a) {
    if (chosen[a] != nullptr) {
      out.Set(static_cast<AnchorIndex>(a), chosen[a]->color,
              static_cast<float>(best[a]));
    }
  }
  return out;
}

}  // namespace

Rgb ClampColor(const Rgb& c) { return {Clamp01(c.r), Clamp01(c.g), Clamp01(c.b)}; }

UnitSphereCloud::UnitSphereCloud(int anchor_count) {
  if (anchor_count < 1) throw InvalidArgument("anchor count must be positive");
  entries_.resize(anchor_count);
}

int UnitSphereCloud::initialized_count() const {
  return static_cast<int>(std::count_if(
      entries_.begin(), entries_.end(),
      [](const AnchorEntry& e) { return e.initialized; }));
}

void UnitSphereCloud::Set(AnchorIndex i, const Rgb& color, float distance) {
  entries_[i] = {ClampColor(color), distance, true};
}

void CameraIntrinsics::Validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw InvalidArgument("focal lengths must be positive");
  }
  if (width < 1 || height < 1) {
    throw InvalidArgument("image size must be positive");
  }
  if (!(cx >= 0.0 && cx < width && cy >= 0.0 && cy < height)) {
    throw InvalidArgument("principal point outside the image");
  }
}

void CameraPose::Validate() const {
  if (std::abs(orientation.Norm() - 1.0) > 1e-6) {
    throw InvalidArgument("pose orientation must be a unit quaternion");
  }
}

PointCloud Backproject(const RgbImage& rgb, const DepthImage& depth,
                       const CameraIntrinsics& intrinsics,
                       const CameraPose& pose) {
  intrinsics.Validate();
  pose.Validate();
  const std::size_t pixel_count =
      static_cast<std::size_t>(intrinsics.width) * intrinsics.height;
  if (rgb.width != intrinsics.width || rgb.height != intrinsics.height ||
      depth.width != intrinsics.width || depth.height != intrinsics.height ||
      rgb.pixels.size() != pixel_count || depth.meters.size() != pixel_count) {
    throw InvalidArgument("image dimensions do not match intrinsics");
  }
  PointCloud cloud;
  cloud.points.reserve(pixel_count);
  const double inv_fx = 1.0 / intrinsics.fx;
  const double inv_fy = 1.0 / intrinsics.fy;
  for (int v = 0; v < intrinsics.height; ++v) {
    for (int u = 0; u < intrinsics.width; ++u) {
      const double d = depth.at(u, v);
      if (d < 0.0 || !std::isfinite(d)) {
        throw InvalidArgument("depth must be finite and nonnegative");
      }
      if (d == 0.0) continue;
      const Vec3 camera{(u - intrinsics.cx) * d * inv_fx,
                        (v - intrinsics.cy) * d * inv_fy, d};
      cloud.points.push_back({pose.CameraToWorld(camera), ClampColor(rgb.at(u, v))});
    }
  }
  return cloud;
}

PointCloud TranslateTo(const PointCloud& cloud, const Vec3& estimation_position) {
  PointCloud out;
  out.points.reserve(cloud.size());
  for (const Point& p : cloud.points) {
    out.points.push_back({p.position - estimation_position, p.color});
  }
  return out;
}

UnitSphereCloud SphereSample(const PointCloud& cloud, const AnchorSet& anchors,
                             const AccelerationGrid& grid) {
  if (grid.anchor_count() != anchors.count()) {
    throw InvalidArgument("grid was built over a different anchor set");
  }
  return DepthCull(cloud, anchors.count(),
                   [&](const Vec3& p) { return grid.Lookup(p); });
}

UnitSphereCloud SphereSampleExact(const PointCloud& cloud,
                                  const AnchorSet& anchors) {
  const ExactAnchorIndex index(anchors);
  return DepthCull(cloud, anchors.count(),
                   [&](const Vec3& p) { return index.Nearest(p); });
}

void MergeInto(UnitSphereCloud& destination, const UnitSphereCloud& source) {
  if (destination.anchor_count() != source.anchor_count()) {
    throw InvalidArgument("cannot merge clouds with different anchor counts");
  }
  const auto src = source.entries();
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i].initialized) {
      destination.Set(static_cast<AnchorIndex>(i), src[i].color,
                      src[i].distance);
    }
  }
}

UnitSphereCloud Merge(const UnitSphereCloud& destination,
                      const UnitSphereCloud& source) {
  UnitSphereCloud out = destination;
  MergeInto(out, source);
  return out;
}

std::vector<Vec3> InitializedDirections(const UnitSphereCloud& cloud,
                                        const AnchorSet& anchors) {
  if (cloud.anchor_count() != anchors.count()) {
    throw InvalidArgument("cloud and anchor set sizes differ");
  }
  std::vector<Vec3> out;
  for (int a = 0; a < cloud.anchor_count(); ++a) {
    if (cloud[a].initialized) out.push_back(anchors.direction(a));
  }
  return out;
}

std::vector<Vec3> PointDirections(const PointCloud& cloud) {
  std::vector<Vec3> out;
  out.reserve(cloud.size());
  for (const Point& p : cloud.points) {
    if (Norm(p.position) > 0.0) out.push_back(p.position);
  }
  return out;
}

const std::vector<ExactAnchorIndex>& EntropyAnchorIndices() {
  static const std::vector<ExactAnchorIndex> indices = [] {
    std::vector<ExactAnchorIndex> v;
    for (int k = 1; k <= 12; ++k) {
      v.emplace_back(GenerateAnchors(1 << k, 0));
    }
    return v;
  }();
  return indices;
}

double CompletenessEntropy(std::span<const Vec3> directions) {
  if (directions.empty()) {
    throw InvalidArgument("entropy needs at least one direction");
  }
  const auto& indices = EntropyAnchorIndices();
  const double sizes = static_cast<double>(indices.size());
  const double total = static_cast<double>(directions.size());
  double h = 0.0;
  std::vector<std::size_t> counts;
  for (const ExactAnchorIndex& index : indices) {
    counts.assign(index.count(), 0);
    for (const Vec3& d : directions) ++counts[index.Nearest(d)];
    for (std::size_t c : counts) {
      if (c == 0) continue;
      const double p = static_cast<double>(c) / total / sizes;
      h -= p * std::log2(p);
    }
  }
  return h;
}

PointCloud UniformRandomDownsample(const PointCloud& cloud, std::size_t k,
                                   std::uint64_t seed) {
  if (k > cloud.size()) {
    throw InvalidArgument("cannot draw " + std::to_string(k) + " of " +
                          std::to_string(cloud.size()) + " points");
  }
  std::vector<std::size_t> order(cloud.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates over the first k slots.
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, order.size() - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  PointCloud out;
  out.points.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.points.push_back(cloud.points[order[i]]);
  return out;
}

std::vector<std::size_t> FarthestPointIndices(const PointCloud& cloud,
                                              std::size_t k) {
  if (k < 1 || k > cloud.size()) {
    throw InvalidArgument("farthest point sampling needs 1 <= k <= count");
  }
  const std::size_t n = cloud.size();
  std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
  std::vector<bool> taken(n, false);
  std::vector<std::size_t> chosen;
  chosen.reserve(k);
  std::size_t current = 0;
  chosen.push_back(current);
  taken[current] = true;
  while (chosen.size() < k) {
    const Vec3& c = cloud.points[current].position;
    std::size_t next = 0;
    double next_dist = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3 delta = cloud.points[i].position - c;
      min_dist[i] = std::min(min_dist[i], Dot(delta, delta));
      if (!taken[i] && min_dist[i] > next_dist) {
        next_dist = min_dist[i];
        next = i;
      }
    }
    current = next;
    taken[current] = true;
    chosen.push_back(current);
  }
  return chosen;
}

PointCloud FarthestPointDownsample(const PointCloud& cloud, std::size_t k) {
  PointCloud out;
  out.points.reserve(k);
  for (std::size_t i : FarthestPointIndices(cloud, k)) {
    out.points.push_back(cloud.points[i]);
  }
  return out;
}

}  // namespace edgelight
