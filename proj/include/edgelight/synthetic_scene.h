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

#ifndef EDGELIGHT_SYNTHETIC_SCENE_H_
#define EDGELIGHT_SYNTHETIC_SCENE_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "edgelight/client_pipeline.h"
#include "edgelight/estimator.h"
#include "edgelight/sampling.h"
#include "edgelight/vec3.h"

namespace edgelight {

struct Box {
  Vec3 min;
  Vec3 max;

  bool Contains(const Vec3& p) const {
    return p.x > min.x && p.x < max.x && p.y > min.y && p.y < max.y &&
           p.z > min.z && p.z < max.z;
  }
  Vec3 Center() const { return (min + max) * 0.5; }
};

// Faces in order -x, +x, -y, +y, -z, +z. World y points up.
enum class Face { kNegX, kPosX, kNegY, kPosY, kNegZ, kPosZ };

struct LightState {
  Vec3 position;
  double temperature_kelvin = 6500.0;  // 1500 - 6500
  double intensity = 1.0;              // fraction of full power, [0, 1]
};

// Blackbody color of a temperature, normalized so red is 1. Piecewise linear
// over three segments with knots at 1500, 2500, 4000 and 6500 K; clamped
// outside that range.
Rgb BlackbodyRgb(double temperature_kelvin);

// A box room lit by a point source, a camera path and estimation positions.
// Wall radiance = emission + albedo * light color * intensity * power *
// max(0, cos) / distance^2.
struct SyntheticScene {
  Box room;
  std::array<Rgb, 6> albedo;
  Rgb emission;       // uniform self-emission of every wall
  double light_power = 2.5;
  CameraIntrinsics intrinsics;
  std::vector<LightState> lights;        // per frame
  std::vector<CameraPose> camera_path;   // per frame
  std::vector<Vec3> estimation_positions;
  double frame_rate = 30.0;

  int frame_count() const { return static_cast<int>(camera_path.size()); }

  // Throws InvalidArgument if the per-frame arrays disagree or a camera or
  // estimation position lies outside the room.
  void Validate() const;

  // Radiance arriving at `origin` from direction `dir` (unit) at a frame.
  // `origin` must be inside the room.
  Rgb Radiance(const Vec3& origin, const Vec3& dir, int frame_index) const;
  // Same with the hit distance along `dir`.
  Rgb Radiance(const Vec3& origin, const Vec3& dir, int frame_index,
               double* distance) const;
};

// Camera pose at `eye` looking at `target`, with world +y as up.
CameraPose LookAt(const Vec3& eye, const Vec3& target);

// Ray-casts every pixel. Depth is meters along the optical axis; colors are
// clamped to [0, 1]. The ambient sample splits the mean wall radiance seen
// from the camera into an intensity (lux) and a chromaticity summing to 1.
// Throws InvalidArgument for an out-of-range index.
FrameInput RenderFrame(const SyntheticScene& scene, int frame_index);

AmbientSample AmbientAt(const SyntheticScene& scene, int frame_index);

// Degree-2 SH of the radiance around `position`, by midpoint quadrature over
// a 250 x 400 (cos polar, azimuth) grid. Throws InvalidArgument if the
// position is outside the room or the index out of range.
ShCoefficients GroundTruthSh(const SyntheticScene& scene, const Vec3& position,
                             int frame_index);

inline constexpr int kDefaultFrameWidth = 256;
inline constexpr int kDefaultFrameHeight = 192;

CameraIntrinsics DefaultIntrinsics(int width = kDefaultFrameWidth,
                                   int height = kDefaultFrameHeight);

// Named scenario library:
//   static  fixed camera and light, two estimation positions
//   r1      fixed camera, temperature ramp 1500 -> 6500 K
//   r2      fixed camera, intensity ramp 0 -> 100% in 1% steps
//   r3      camera orbits the light at constant temperature and intensity
// Throws InvalidArgument for unknown names.
SyntheticScene MakeScenario(const std::string& name, int frames,
                            int width = kDefaultFrameWidth,
                            int height = kDefaultFrameHeight);

// A random room, camera and estimation position for evaluation sweeps. One
// frame long.
SyntheticScene RandomScene(std::uint64_t seed, int width = kDefaultFrameWidth,
                           int height = kDefaultFrameHeight);

}  // namespace edgelight

#endif  // EDGELIGHT_SYNTHETIC_SCENE_H_
