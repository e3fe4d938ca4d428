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

#ifndef EDGELIGHT_SAMPLING_H_
#define EDGELIGHT_SAMPLING_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "edgelight/sphere_geometry.h"
#include "edgelight/vec3.h"

namespace edgelight {

// RGB in [0, 1].
struct Rgb {
  float r = 0.0f;
  float g = 0.0f;
  float b = 0.0f;

  float operator[](int c) const { return c == 0 ? r : (c == 1 ? g : b); }
  friend constexpr bool operator==(const Rgb&, const Rgb&) = default;
};

Rgb ClampColor(const Rgb& c);

struct Point {
  Vec3 position;  // meters
  Rgb color;
};

struct PointCloud {
  std::vector<Point> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

// One slot of the compressed observation. Uninitialized slots are all-zero.
struct AnchorEntry {
  Rgb color;
  float distance = 0.0f;  // meters from the sphere origin
  bool initialized = false;

  friend constexpr bool operator==(const AnchorEntry&,
                                   const AnchorEntry&) = default;
};

// Per-anchor (color, distance) record; the array position names the anchor.
class UnitSphereCloud {
 public:
  UnitSphereCloud() = default;
  explicit UnitSphereCloud(int anchor_count);

  int anchor_count() const { return static_cast<int>(entries_.size()); }
  int initialized_count() const;

  const AnchorEntry& operator[](AnchorIndex i) const { return entries_[i]; }
  std::span<const AnchorEntry> entries() const { return entries_; }

  // Marks anchor `i` as observed.
  void Set(AnchorIndex i, const Rgb& color, float distance);
  void Clear(AnchorIndex i) { entries_[i] = {}; }

  friend bool operator==(const UnitSphereCloud&,
                         const UnitSphereCloud&) = default;

 private:
  std::vector<AnchorEntry> entries_;
};

struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  // Throws InvalidArgument when the invariants do not hold.
  void Validate() const;
  friend constexpr bool operator==(const CameraIntrinsics&,
                                   const CameraIntrinsics&) = default;
};

// Camera-to-world transform. Camera space is x right, y down, z forward.
struct CameraPose {
  Vec3 position;
  Quaternion orientation;

  void Validate() const;
  Vec3 CameraToWorld(const Vec3& p) const {
    return orientation.Rotate(p) + position;
  }
  Vec3 WorldToCamera(const Vec3& p) const {
    return orientation.Conjugate().Rotate(p - position);
  }
  friend constexpr bool operator==(const CameraPose&,
                                   const CameraPose&) = default;
};

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<Rgb> pixels;  // row-major

  const Rgb& at(int u, int v) const {
    return pixels[static_cast<std::size_t>(v) * width + u];
  }
};

struct DepthImage {
  int width = 0;
  int height = 0;
  std::vector<float> meters;  // row-major, 0 means no return

  float at(int u, int v) const {
    return meters[static_cast<std::size_t>(v) * width + u];
  }
};

// Pixels with zero depth are skipped; output is in row-major pixel order.
PointCloud Backproject(const RgbImage& rgb, const DepthImage& depth,
                       const CameraIntrinsics& intrinsics,
                       const CameraPose& pose);

// Re-centers the cloud on `estimation_position`.
PointCloud TranslateTo(const PointCloud& cloud, const Vec3& estimation_position);

// Projects every point onto the anchor sphere and keeps, per anchor, the point
// nearest the origin (first seen wins on equal distance). Points at the origin
// are ignored. The grid decides anchor membership.
UnitSphereCloud SphereSample(const PointCloud& cloud, const AnchorSet& anchors,
                             const AccelerationGrid& grid);

// Same depth-culling rule with exact nearest-anchor membership.
UnitSphereCloud SphereSampleExact(const PointCloud& cloud,
                                  const AnchorSet& anchors);

// Anchor-wise overwrite: initialized source entries replace destination ones.
UnitSphereCloud Merge(const UnitSphereCloud& destination,
                      const UnitSphereCloud& source);
void MergeInto(UnitSphereCloud& destination, const UnitSphereCloud& source);

// Directions (from the sphere origin) of the initialized anchors.
std::vector<Vec3> InitializedDirections(const UnitSphereCloud& cloud,
                                        const AnchorSet& anchors);
std::vector<Vec3> PointDirections(const PointCloud& cloud);

// Observation-completeness joint entropy in bits over anchor sizes
// S = {2, 4, ..., 4096}: each direction is assigned to its exact nearest
// anchor at every size, and each size contributes its anchor histogram with
// mass 1/|S|. Ranges from log2(12) (one direction) to log2(12) + 6.5
// (uniform limit).
double CompletenessEntropy(std::span<const Vec3> directions);

// Lazily built, shared anchor indices for the entropy sizes.
const std::vector<ExactAnchorIndex>& EntropyAnchorIndices();

PointCloud UniformRandomDownsample(const PointCloud& cloud, std::size_t k,
                                   std::uint64_t seed);

// Greedy farthest-point sampling seeded at index 0, lowest index on ties.
PointCloud FarthestPointDownsample(const PointCloud& cloud, std::size_t k);
std::vector<std::size_t> FarthestPointIndices(const PointCloud& cloud,
                                              std::size_t k);

}  // namespace edgelight

#endif  // EDGELIGHT_SAMPLING_H_
