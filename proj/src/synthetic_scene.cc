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

#include "edgelight/synthetic_scene.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "edgelight/edge_service.h"
#include "edgelight/errors.h"

namespace edgelight {
namespace {

struct Knot {
  double kelvin;
  Rgb color;
};

// Red-normalized blackbody colors.
constexpr Knot kBlackbody[] = {
    {1500.0, {1.0f, 0.427f, 0.000f}},
    {2500.0, {1.0f, 0.624f, 0.275f}},
    {4000.0, {1.0f, 0.808f, 0.651f}},
    {6500.0, {1.0f, 0.996f, 0.980f}},
};

struct Hit {
  double t = 0.0;
  Face face = Face::kNegX;
  Vec3 point;
};

// `origin` is inside the box, so the ray always exits through one face.
Hit CastFromInside(const Box& box, const Vec3& origin, const Vec3& dir) {
  Hit hit;
  hit.t = std::numeric_limits<double>::infinity();
  const double o[3] = {origin.x, origin.y, origin.z};
  const double d[3] = {dir.x, dir.y, dir.z};
  const double lo[3] = {box.min.x, box.min.y, box.min.z};
  const double hi[3] = {box.max.x, box.max.y, box.max.z};
  for (int axis = 0; axis < 3; ++axis) {
    if (d[axis] == 0.0) continue;
    const bool positive = d[axis] > 0.0;
    const double t = ((positive ? hi[axis] : lo[axis]) - o[axis]) / d[axis];
    if (t < hit.t) {
      hit.t = t;
      hit.face = static_cast<Face>(2 * axis + (positive ? 1 : 0));
    }
  }
  hit.point = origin + dir * hit.t;
  return hit;
}

Vec3 InwardNormal(Face face) {
  switch (face) {
    case Face::kNegX: return {1, 0, 0};
    case Face::kPosX: return {-1, 0, 0};
    case Face::kNegY: return {0, 1, 0};
    case Face::kPosY: return {0, -1, 0};
    case Face::kNegZ: return {0, 0, 1};
    case Face::kPosZ: return {0, 0, -1};
  }
  return {};
}

Rgb SurfaceRadiance(const SyntheticScene& scene, const Hit& hit, int frame) {
  const LightState& light = scene.lights[frame];
  const Rgb& albedo = scene.albedo[static_cast<int>(hit.face)];
  const Vec3 to_light = light.position - hit.point;
  const double dist2 = Dot(to_light, to_light);
  double irradiance = 0.0;
  if (dist2 > 0.0) {
    const double cosine = Dot(InwardNormal(hit.face), to_light) / std::sqrt(dist2);
    irradiance = std::max(0.0, cosine) * light.intensity * scene.light_power / dist2;
  }
  const Rgb tint = BlackbodyRgb(light.temperature_kelvin);
  return {static_cast<float>(scene.emission.r + albedo.r * tint.r * irradiance),
          static_cast<float>(scene.emission.g + albedo.g * tint.g * irradiance),
          static_cast<float>(scene.emission.b + albedo.b * tint.b * irradiance)};
}

void CheckFrame(const SyntheticScene& scene, int frame_index) {
  if (frame_index < 0 || frame_index >= scene.frame_count()) {
    throw InvalidArgument("frame index " + std::to_string(frame_index) +
                          " out of range");
  }
}

Quaternion FromBasis(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
  // Columns of a rotation matrix.
  const double m00 = c0.x, m01 = c1.x, m02 = c2.x;
  const double m10 = c0.y, m11 = c1.y, m12 = c2.y;
  const double m20 = c0.z, m21 = c1.z, m22 = c2.z;
  const double trace = m00 + m11 + m22;
  Quaternion q;
  if (trace > 0.0) {
    const double s = std::sqrt(trace + 1.0) * 2.0;
    q = {0.25 * s, (m21 - m12) / s, (m02 - m20) / s, (m10 - m01) / s};
  } else if (m00 > m11 && m00 > m22) {
    const double s = std::sqrt(1.0 + m00 - m11 - m22) * 2.0;
    q = {(m21 - m12) / s, 0.25 * s, (m01 + m10) / s, (m02 + m20) / s};
  } else if (m11 > m22) {
    const double s = std::sqrt(1.0 + m11 - m00 - m22) * 2.0;
    q = {(m02 - m20) / s, (m01 + m10) / s, 0.25 * s, (m12 + m21) / s};
  } else {
    const double s = std::sqrt(1.0 + m22 - m00 - m11) * 2.0;
    q = {(m10 - m01) / s, (m02 + m20) / s, (m12 + m21) / s, 0.25 * s};
  }
  const double n = q.Norm();
  return {q.w / n, q.x / n, q.y / n, q.z / n};
}

SyntheticScene BaseRoom(int width, int height) {
  SyntheticScene scene;
  scene.room = {{-3.0, -1.5, -3.0}, {3.0, 1.5, 3.0}};
  scene.albedo = {Rgb{0.80f, 0.55f, 0.45f}, Rgb{0.45f, 0.65f, 0.80f},
                  Rgb{0.55f, 0.50f, 0.40f}, Rgb{0.85f, 0.85f, 0.85f},
                  Rgb{0.60f, 0.80f, 0.55f}, Rgb{0.75f, 0.70f, 0.65f}};
  scene.emission = {0.03f, 0.03f, 0.03f};
  scene.light_power = 2.5;
  scene.intrinsics = DefaultIntrinsics(width, height);
  return scene;
}

}  // namespace

Rgb BlackbodyRgb(double temperature_kelvin) {
  constexpr int kKnots = sizeof(kBlackbody) / sizeof(kBlackbody[0]);
  if (temperature_kelvin <= kBlackbody[0].kelvin) return kBlackbody[0].color;
  if (temperature_kelvin >= kBlackbody[kKnots - 1].kelvin) {
    return kBlackbody[kKnots - 1].color;
  }
  int seg = 0;
  while (temperature_kelvin > kBlackbody[seg + 1].kelvin) ++seg;
  const Knot& a = kBlackbody[seg];
  const Knot& b = kBlackbody[seg + 1];
  const float t = static_cast<float>((temperature_kelvin - a.kelvin) /
                                     (b.kelvin - a.kelvin));
  return {a.color.r + t * (b.color.r - a.color.r),
          a.color.g + t * (b.color.g - a.color.g),
          a.color.b + t * (b.color.b - a.color.b)};
}

void SyntheticScene::Validate() const {
  if (lights.size() != camera_path.size()) {
    throw InvalidArgument("scene needs one light state per frame");
  }
  for (const CameraPose& pose : camera_path) {
    if (!room.Contains(pose.position)) {
      throw InvalidArgument("camera outside the room");
    }
  }
  for (const Vec3& p : estimation_positions) {
    if (!room.Contains(p)) throw InvalidArgument("estimation position outside the room");
  }
  intrinsics.Validate();
}

Rgb SyntheticScene::Radiance(const Vec3& origin, const Vec3& dir,
                             int frame_index) const {
  return Radiance(origin, dir, frame_index, nullptr);
}

Rgb SyntheticScene::Radiance(const Vec3& origin, const Vec3& dir, int frame_index,
                             double* distance) const {
  const Hit hit = CastFromInside(room, origin, dir);
  if (distance != nullptr) *distance = hit.t;
  return SurfaceRadiance(*this, hit, frame_index);
}

CameraPose LookAt(const Vec3& eye, const Vec3& target) {
  const Vec3 forward = Normalized(target - eye);
  Vec3 right = Cross(forward, Vec3{0, 1, 0});
  if (Norm(right) < 1e-9) right = Cross(forward, Vec3{0, 0, 1});
  right = Normalized(right);
  const Vec3 down = Cross(forward, right);
  return {eye, FromBasis(right, down, forward)};
}

CameraIntrinsics DefaultIntrinsics(int width, int height) {
  // Roughly a 60 degree horizontal field of view.
  const double f = 0.866 * width;
  return {f, f, width / 2.0, height / 2.0, width, height};
}

AmbientSample AmbientAt(const SyntheticScene& scene, int frame_index) {
  CheckFrame(scene, frame_index);
  constexpr int kRows = 24;
  constexpr int kCols = 48;
  const Vec3 origin = scene.camera_path[frame_index].position;
  double sum[3] = {0, 0, 0};
  for (int i = 0; i < kRows; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / kRows;
    const double r = std::sqrt(1.0 - z * z);
    for (int j = 0; j < kCols; ++j) {
      const double phi = 2.0 * std::numbers::pi * (j + 0.5) / kCols;
      const Rgb c = scene.Radiance(origin, {r * std::cos(phi), r * std::sin(phi), z},
                                   frame_index);
      sum[0] += c.r;
      sum[1] += c.g;
      sum[2] += c.b;
    }
  }
  const double n = kRows * kCols;
  const double total = (sum[0] + sum[1] + sum[2]) / n;
  AmbientSample ambient;
  ambient.intensity = 1000.0 * total;
  if (total > 0.0) {
    ambient.color = {static_cast<float>(sum[0] / n / total),
                     static_cast<float>(sum[1] / n / total),
                     static_cast<float>(sum[2] / n / total)};
  }
  return ambient;
}

FrameInput RenderFrame(const SyntheticScene& scene, int frame_index) {
  CheckFrame(scene, frame_index);
  const CameraIntrinsics& k = scene.intrinsics;
  const CameraPose& pose = scene.camera_path[frame_index];
  FrameInput frame;
  frame.timestamp = frame_index / scene.frame_rate;
  frame.pose = pose;
  frame.ambient = AmbientAt(scene, frame_index);
  frame.estimation_positions = scene.estimation_positions;
  frame.rgb = {k.width, k.height, {}};
  frame.depth = {k.width, k.height, {}};
  const std::size_t pixels = static_cast<std::size_t>(k.width) * k.height;
  frame.rgb.pixels.reserve(pixels);
  frame.depth.meters.reserve(pixels);
  for (int v = 0; v < k.height; ++v) {
    for (int u = 0; u < k.width; ++u) {
      // Unnormalized camera ray with unit z: the hit parameter is the depth.
      const Vec3 ray_cam{(u - k.cx) / k.fx, (v - k.cy) / k.fy, 1.0};
      const Vec3 ray_world = pose.orientation.Rotate(ray_cam);
      const Hit hit = CastFromInside(scene.room, pose.position, ray_world);
      frame.depth.meters.push_back(static_cast<float>(hit.t));
      frame.rgb.pixels.push_back(ClampColor(SurfaceRadiance(scene, hit, frame_index)));
    }
  }
  return frame;
}

ShCoefficients GroundTruthSh(const SyntheticScene& scene, const Vec3& position,
                             int frame_index) {
  CheckFrame(scene, frame_index);
  if (!scene.room.Contains(position)) {
    throw InvalidArgument("ground truth position outside the room");
  }
  constexpr int kRows = 250;  // uniform in cos(polar)
  constexpr int kCols = 400;
  ShCoefficients sh;
  for (int i = 0; i < kRows; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / kRows;
    const double r = std::sqrt(1.0 - z * z);
    for (int j = 0; j < kCols; ++j) {
      const double phi = 2.0 * std::numbers::pi * (j + 0.5) / kCols;
      const Vec3 dir{r * std::cos(phi), r * std::sin(phi), z};
      const Rgb c = scene.Radiance(position, dir, frame_index);
      const auto basis = ShBasis(dir);
      for (int b = 0; b < kShBasisCount; ++b) {
        sh.at(0, b) += c.r * basis[b];
        sh.at(1, b) += c.g * basis[b];
        sh.at(2, b) += c.b * basis[b];
      }
    }
  }
  const double weight = 4.0 * std::numbers::pi / (kRows * kCols);
  for (double& v : sh.values) v *= weight;
  return sh;
}

SyntheticScene MakeScenario(const std::string& name, int frames, int width,
                            int height) {
  if (frames < 1) throw InvalidArgument("a scenario needs at least one frame");
  SyntheticScene scene = BaseRoom(width, height);
  const Vec3 light_position{0.0, 0.0, 0.0};
  const Vec3 table{0.4, -0.7, 0.8};
  const CameraPose fixed = LookAt({0.0, -0.2, -2.2}, table);
  auto progress = [frames](int i) {
    return frames == 1 ? 0.0 : static_cast<double>(i) / (frames - 1);
  };

  if (name == "static") {
    scene.estimation_positions = FanOutPositions(table, {0.6, 0.0, 0.0}, 2);
    for (int i = 0; i < frames; ++i) {
      scene.lights.push_back({light_position, 4500.0, 0.8});
      scene.camera_path.push_back(fixed);
    }
  } else if (name == "r1") {
    scene.estimation_positions = {table};
    for (int i = 0; i < frames; ++i) {
      scene.lights.push_back({light_position, 1500.0 + 5000.0 * progress(i), 0.8});
      scene.camera_path.push_back(fixed);
    }
  } else if (name == "r2") {
    scene.estimation_positions = {table};
    for (int i = 0; i < frames; ++i) {
      const double percent = std::round(100.0 * progress(i));
      scene.lights.push_back({light_position, 4500.0, percent / 100.0});
      scene.camera_path.push_back(fixed);
    }
  } else if (name == "r3") {
    const Vec3 center{0.0, -0.7, 0.0};
    scene.estimation_positions = {center};
    for (int i = 0; i < frames; ++i) {
      const double angle = 2.0 * std::numbers::pi * progress(i);
      const Vec3 eye{2.0 * std::sin(angle), -0.2, -2.0 * std::cos(angle)};
      scene.lights.push_back({light_position, 4500.0, 0.8});
      scene.camera_path.push_back(LookAt(eye, center));
    }
  } else {
    throw InvalidArgument("unknown scenario '" + name + "'");
  }
  scene.Validate();
  return scene;
}

SyntheticScene RandomScene(std::uint64_t seed, int width, int height) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  SyntheticScene scene = BaseRoom(width, height);
  const double hx = uniform(1.5, 4.0);
  const double hy = uniform(1.2, 1.75);
  const double hz = uniform(1.5, 4.0);
  scene.room = {{-hx, -hy, -hz}, {hx, hy, hz}};
  for (Rgb& a : scene.albedo) {
    a = {static_cast<float>(uniform(0.2, 0.9)), static_cast<float>(uniform(0.2, 0.9)),
         static_cast<float>(uniform(0.2, 0.9))};
  }
  const Vec3 light{uniform(-0.5, 0.5) * hx, uniform(0.0, 0.6) * hy,
                   uniform(-0.5, 0.5) * hz};
  const Vec3 eye{uniform(-0.7, 0.7) * hx, uniform(-0.5, 0.3) * hy,
                 uniform(-0.7, 0.7) * hz};
  const double yaw = uniform(0.0, 2.0 * std::numbers::pi);
  const double pitch = uniform(-0.35, 0.1);
  const Vec3 forward{std::cos(pitch) * std::sin(yaw), std::sin(pitch),
                     std::cos(pitch) * std::cos(yaw)};
  // Estimation position in front of the camera, pulled back inside the room.
  double reach = uniform(0.8, 2.0);
  Vec3 target = eye + forward * reach;
  const Box inner{scene.room.min + Vec3{0.2, 0.2, 0.2},
                  scene.room.max - Vec3{0.2, 0.2, 0.2}};
  while (!inner.Contains(target) && reach > 0.05) {
    reach *= 0.8;
    target = eye + forward * reach;
  }
  scene.estimation_positions = {target};
  scene.lights = {{light, uniform(1500.0, 6500.0), uniform(0.3, 1.0)}};
  scene.camera_path = {LookAt(eye, eye + forward)};
  scene.Validate();
  return scene;
}

}  // namespace edgelight
