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

#ifndef EDGELIGHT_SPHERE_GEOMETRY_H_
#define EDGELIGHT_SPHERE_GEOMETRY_H_

#include <cstdint>
#include <span>
#include <vector>

#include "edgelight/vec3.h"

namespace edgelight {

using AnchorIndex = std::uint32_t;

inline constexpr int kDefaultAnchorCount = 1280;
// Neighbors stored per anchor; a pooling window may span at most this many
// neighbors plus the anchor itself.
inline constexpr int kDefaultNeighborCapacity = 15;
inline constexpr int kDefaultGridWidth = 1024;
inline constexpr int kDefaultGridHeight = 512;

// Ordered set of unit directions shared by client and server. Anchors are
// identified purely by their position in the array, so both sides must build
// the set from the same count.
class AnchorSet {
 public:
  // Builds the set from explicit directions (normalized on entry). Mostly
  // useful for tests that need hand-placed anchors.
  static AnchorSet FromDirections(std::vector<Vec3> directions,
                                  int neighbor_capacity);

  int count() const { return static_cast<int>(directions_.size()); }
  int neighbor_capacity() const { return neighbor_capacity_; }

  const Vec3& direction(AnchorIndex i) const { return directions_[i]; }
  std::span<const Vec3> directions() const { return directions_; }

  // The neighbor_capacity() nearest other anchors of `i`, closest first.
  std::span<const AnchorIndex> neighbors(AnchorIndex i) const {
    return {neighbors_.data() + static_cast<std::size_t>(i) * neighbor_capacity_,
            static_cast<std::size_t>(neighbor_capacity_)};
  }

 private:
  AnchorSet() = default;

  std::vector<Vec3> directions_;
  int neighbor_capacity_ = 0;
  std::vector<AnchorIndex> neighbors_;  // count * neighbor_capacity, row-major
};

// Fibonacci lattice: z_j = 1 - (2j+1)/count, azimuth_j = j * pi * (3 - sqrt 5).
// Throws InvalidArgument unless count >= 2 and neighbor_capacity < count.
AnchorSet GenerateAnchors(int count,
                          int neighbor_capacity = kDefaultNeighborCapacity);

struct Spherical {
  double polar = 0.0;    // [0, pi]
  double azimuth = 0.0;  // [0, 2pi)
};

// Nonzero input is normalized first; zero or non-finite input throws.
Spherical ToSpherical(const Vec3& direction);
Vec3 FromSpherical(const Spherical& s);

// Exhaustive nearest anchor by angular distance; ties go to the lower index.
AnchorIndex NearestAnchorExact(const AnchorSet& anchors, const Vec3& direction);

// Exact nearest-anchor queries in O(log n) via a kd-tree over the anchor
// directions. Returns the same index as NearestAnchorExact, tie rule included.
class ExactAnchorIndex {
 public:
  explicit ExactAnchorIndex(const AnchorSet& anchors);
  explicit ExactAnchorIndex(std::span<const Vec3> unit_directions);

  AnchorIndex Nearest(const Vec3& direction) const;
  int count() const { return static_cast<int>(points_.size()); }

 private:
  struct Node {
    int begin = 0;  // range into order_
    int end = 0;
    int axis = -1;  // -1 for leaves
    double split = 0.0;
    int left = -1;
    int right = -1;
  };

  int Build(int begin, int end);
  void Search(int node, const Vec3& q, double& best_dot,
              AnchorIndex& best) const;

  std::vector<Vec3> points_;
  std::vector<AnchorIndex> order_;
  std::vector<Node> nodes_;
};

// Precomputed (azimuth, polar) table holding the nearest anchor of each cell
// center, for O(1) approximate lookups at runtime.
class AccelerationGrid {
 public:
  int width() const { return width_; }
  int height() const { return height_; }
  int anchor_count() const { return anchor_count_; }

  AnchorIndex cell(int u, int v) const {
    return cells_[static_cast<std::size_t>(v) * width_ + u];
  }
  std::span<const AnchorIndex> cells() const { return cells_; }

  // Direction of the center of cell (u, v).
  Vec3 CellCenter(int u, int v) const;

  // Throws InvalidArgument on a zero or non-finite direction.
  AnchorIndex Lookup(const Vec3& direction) const;

 private:
  friend AccelerationGrid BuildGrid(const AnchorSet&, int, int);

  int width_ = 0;
  int height_ = 0;
  int anchor_count_ = 0;
  std::vector<AnchorIndex> cells_;  // row-major over polar rows
};

AccelerationGrid BuildGrid(const AnchorSet& anchors,
                           int width = kDefaultGridWidth,
                           int height = kDefaultGridHeight);

}  // namespace edgelight

#endif  // EDGELIGHT_SPHERE_GEOMETRY_H_
