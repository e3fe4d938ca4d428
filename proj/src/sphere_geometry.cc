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

#include "edgelight/sphere_geometry.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "edgelight/errors.h"

namespace edgelight {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec3 CheckedUnit(const Vec3& v) {
  const double n = Norm(v);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw InvalidArgument("direction must be finite and nonzero");
  }
  return v * (1.0 / n);
}

double Component(const Vec3& v, int axis) {
  return axis == 0 ? v.x : (axis == 1 ? v.y : v.z);
}

}  // namespace

AnchorSet AnchorSet::FromDirections(std::vector<Vec3> directions,
                                    int neighbor_capacity) {
  const int count = static_cast<int>(directions.size());
  if (count < 2) throw InvalidArgument("anchor count must be at least 2");
  if (neighbor_capacity < 0 || neighbor_capacity >= count) {
    throw InvalidArgument("neighbor capacity must be in [0, count)");
  }
  AnchorSet set;
  set.neighbor_capacity_ = neighbor_capacity;
  set.directions_.reserve(directions.size());
  for (const Vec3& d : directions) set.directions_.push_back(CheckedUnit(d));

  set.neighbors_.resize(static_cast<std::size_t>(count) * neighbor_capacity);
  std::vector<AnchorIndex> others(count - 1);
  std::vector<double> dots(count);
  for (int i = 0; i < count; ++i) {
    const Vec3& di = set.directions_[i];
    for (int j = 0; j < count; ++j) dots[j] = Dot(di, set.directions_[j]);
    int n = 0;
    for (int j = 0; j < count; ++j) {
      if (j != i) others[n++] = static_cast<AnchorIndex>(j);
    }
    // Larger dot means smaller angular distance.
    std::partial_sort(others.begin(), others.begin() + neighbor_capacity,
                      others.end(), [&](AnchorIndex a, AnchorIndex b) {
                        if (dots[a] != dots[b]) return dots[a] > dots[b];
                        return a < b;
                      });
    std::copy_n(others.begin(), neighbor_capacity,
                set.neighbors_.begin() +
                    static_cast<std::ptrdiff_t>(i) * neighbor_capacity);
  }
  return set;
}

AnchorSet GenerateAnchors(int count, int neighbor_capacity) {
  if (count < 2) throw InvalidArgument("anchor count must be at least 2");
  if (neighbor_capacity < 0 || neighbor_capacity >= count) {
    throw InvalidArgument("neighbor capacity must be in [0, count), got " +
                          std::to_string(neighbor_capacity));
  }
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Vec3> directions;
  directions.reserve(count);
  for (int j = 0; j < count; ++j) {
    const double z = 1.0 - (2.0 * j + 1.0) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double azimuth = j * golden_angle;
    directions.push_back({r * std::cos(azimuth), r * std::sin(azimuth), z});
  }
  return AnchorSet::FromDirections(std::move(directions), neighbor_capacity);
}

Spherical ToSpherical(const Vec3& direction) {
  const Vec3 d = CheckedUnit(direction);
  Spherical s;
  s.polar = std::acos(std::clamp(d.z, -1.0, 1.0));
  double azimuth = std::atan2(d.y, d.x);
  if (azimuth < 0.0) azimuth += kTwoPi;
  if (azimuth >= kTwoPi) azimuth = 0.0;
  s.azimuth = azimuth;
  return s;
}

Vec3 FromSpherical(const Spherical& s) {
  const double r = std::sin(s.polar);
  return {r * std::cos(s.azimuth), r * std::sin(s.azimuth), std::cos(s.polar)};
}

AnchorIndex NearestAnchorExact(const AnchorSet& anchors, const Vec3& direction) {
  const Vec3 d = CheckedUnit(direction);
  AnchorIndex best = 0;
  double best_dot = -2.0;
  const auto dirs = anchors.directions();
  for (std::size_t j = 0; j < dirs.size(); ++j) {
    const double dot = Dot(d, dirs[j]);
    if (dot > best_dot) {
      best_dot = dot;
      best = static_cast<AnchorIndex>(j);
    }
  }
  return best;
}

ExactAnchorIndex::ExactAnchorIndex(const AnchorSet& anchors)
    : ExactAnchorIndex(anchors.directions()) {}

ExactAnchorIndex::ExactAnchorIndex(std::span<const Vec3> unit_directions)
    : points_(unit_directions.begin(), unit_directions.end()),
      order_(unit_directions.size()) {
  if (points_.empty()) throw InvalidArgument("empty direction set");
  std::iota(order_.begin(), order_.end(), AnchorIndex{0});
  nodes_.reserve(2 * points_.size() / 4 + 1);
  Build(0, static_cast<int>(points_.size()));
}

int ExactAnchorIndex::Build(int begin, int end) {
  constexpr int kLeafSize = 8;
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({begin, end, -1, 0.0, -1, -1});
  if (end - begin <= kLeafSize) return id;

  Vec3 lo{2, 2, 2};
  Vec3 hi{-2, -2, -2};
  for (int k = begin; k < end; ++k) {
    const Vec3& p = points_[order_[k]];
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  const Vec3 extent = hi - lo;
  int axis = 0;
  if (extent.y > extent.x) axis = 1;
  if (extent.z > Component(extent, axis)) axis = 2;

  const int mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end, [&](AnchorIndex a, AnchorIndex b) {
                     return Component(points_[a], axis) <
                            Component(points_[b], axis);
                   });
  const double split = Component(points_[order_[mid]], axis);
  const int left = Build(begin, mid);
  const int right = Build(mid, end);
  Node& node = nodes_[id];
  node.axis = axis;
  node.split = split;
  node.left = left;
  node.right = right;
  return id;
}

void ExactAnchorIndex::Search(int node_id, const Vec3& q, double& best_dot,
                              AnchorIndex& best) const {
  const Node& node = nodes_[node_id];
  if (node.axis < 0) {
    for (int k = node.begin; k < node.end; ++k) {
      const AnchorIndex idx = order_[k];
      const double dot = Dot(q, points_[idx]);
      if (dot > best_dot || (dot == best_dot && idx < best)) {
        best_dot = dot;
        best = idx;
      }
    }
    return;
  }
  // Left holds coordinates <= split, right holds >= split.
  const double diff = Component(q, node.axis) - node.split;
  const int near_child = diff < 0.0 ? node.left : node.right;
  const int far_child = diff < 0.0 ? node.right : node.left;
  Search(near_child, q, best_dot, best);
  // Any point across the plane has chord^2 >= diff^2, i.e.
  // dot <= 1 - diff^2 / 2. The slack absorbs unit-norm rounding.
  const double bound = 1.0 - 0.5 * diff * diff + 1e-9;
  if (bound >= best_dot) Search(far_child, q, best_dot, best);
}

AnchorIndex ExactAnchorIndex::Nearest(const Vec3& direction) const {
  const Vec3 q = CheckedUnit(direction);
  double best_dot = -3.0;
  AnchorIndex best = 0;
  Search(0, q, best_dot, best);
  return best;
}

Vec3 AccelerationGrid::CellCenter(int u, int v) const {
  return FromSpherical({std::numbers::pi * (v + 0.5) / height_,
                        kTwoPi * (u + 0.5) / width_});
}

AnchorIndex AccelerationGrid::Lookup(const Vec3& direction) const {
  const Spherical s = ToSpherical(direction);
  const int u = std::clamp(
      static_cast<int>(std::floor(s.azimuth / kTwoPi * width_)), 0, width_ - 1);
  const int v =
      std::clamp(static_cast<int>(std::floor(s.polar / std::numbers::pi * height_)),
                 0, height_ - 1);
  return cell(u, v);
}

AccelerationGrid BuildGrid(const AnchorSet& anchors, int width, int height) {
  if (width < 1 || height < 1) {
    throw InvalidArgument("grid dimensions must be positive");
  }
  AccelerationGrid grid;
  grid.width_ = width;
  grid.height_ = height;
  grid.anchor_count_ = anchors.count();
  grid.cells_.resize(static_cast<std::size_t>(width) * height);
  const ExactAnchorIndex index(anchors);
  for (int v = 0; v < height; ++v) {
    for (int u = 0; u < width; ++u) {
      grid.cells_[static_cast<std::size_t>(v) * width + u] =
          index.Nearest(grid.CellCenter(u, v));
    }
  }
  return grid;
}

}  // namespace edgelight
