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

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "edgelight/errors.h"
#include "edgelight/replay.h"

namespace edgelight {
namespace {

using nlohmann::json;

class Writer {
 public:
  void U8(std::uint8_t v) { buf_.push_back(v); }
  void U16(std::uint16_t v) {
    buf_.push_back(static_cast<std::uint8_t>(v & 0xffu));
    buf_.push_back(static_cast<std::uint8_t>(v >> 8));
  }
  void U32(std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) buf_.push_back(static_cast<std::uint8_t>(v >> s));
  }
  void U64(std::uint64_t v) {
    for (int s = 0; s < 64; s += 8) buf_.push_back(static_cast<std::uint8_t>(v >> s));
  }
  void F32(double v) { U32(std::bit_cast<std::uint32_t>(static_cast<float>(v))); }
  void F64(double v) { U64(std::bit_cast<std::uint64_t>(v)); }
  const std::vector<std::uint8_t>& bytes() const { return buf_; }

 private:
  std::vector<std::uint8_t> buf_;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& buf) : buf_(buf) {}

  bool done() const { return at_ == buf_.size(); }
  std::size_t offset() const { return at_; }

  void Need(std::size_t n) const {
    if (buf_.size() - at_ < n) {
      throw MalformedRecording("frames file truncated at byte " + std::to_string(at_));
    }
  }
  std::uint8_t U8() {
    Need(1);
    return buf_[at_++];
  }
  std::uint16_t U16() {
    Need(2);
    const auto v = static_cast<std::uint16_t>(buf_[at_] | (buf_[at_ + 1] << 8));
    at_ += 2;
    return v;
  }
  std::uint32_t U32() {
    Need(4);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(buf_[at_ + k]) << (8 * k);
    at_ += 4;
    return v;
  }
  std::uint64_t U64() {
    Need(8);
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(buf_[at_ + k]) << (8 * k);
    at_ += 8;
    return v;
  }
  double F32() { return std::bit_cast<float>(U32()); }
  double F64() { return std::bit_cast<double>(U64()); }

 private:
  const std::vector<std::uint8_t>& buf_;
  std::size_t at_ = 0;
};

json ManifestJson(const RecordingManifest& m) {
  return {{"format_version", m.format_version},
          {"scenario", m.scenario},
          {"synthetic", m.synthetic},
          {"frame_count", m.frame_count},
          {"anchor_count", m.anchor_count},
          {"depth_unit", m.depth_unit},
          {"intrinsics",
           {{"fx", m.intrinsics.fx},
            {"fy", m.intrinsics.fy},
            {"cx", m.intrinsics.cx},
            {"cy", m.intrinsics.cy},
            {"width", m.intrinsics.width},
            {"height", m.intrinsics.height}}}};
}

RecordingManifest ParseManifest(const json& j) {
  RecordingManifest m;
  m.format_version = j.at("format_version").get<int>();
  if (m.format_version != 1) {
    throw MalformedRecording("unsupported recording version " +
                             std::to_string(m.format_version));
  }
  m.scenario = j.at("scenario").get<std::string>();
  m.synthetic = j.value("synthetic", false);
  m.frame_count = j.at("frame_count").get<int>();
  m.anchor_count = j.at("anchor_count").get<int>();
  m.depth_unit = j.at("depth_unit").get<std::string>();
  if (m.depth_unit != "millimeters") {
    throw MalformedRecording("unsupported depth unit " + m.depth_unit);
  }
  const json& k = j.at("intrinsics");
  m.intrinsics = {k.at("fx").get<double>(),   k.at("fy").get<double>(),
                  k.at("cx").get<double>(),   k.at("cy").get<double>(),
                  k.at("width").get<int>(),   k.at("height").get<int>()};
  if (m.frame_count < 0) throw MalformedRecording("negative frame count");
  try {
    m.intrinsics.Validate();
  } catch (const InvalidArgument& e) {
    throw MalformedRecording(std::string("bad intrinsics: ") + e.what());
  }
  return m;
}

}  // namespace

RecordedFrame ToRecordedFrame(const FrameInput& frame) {
  // Everything but the timestamp is stored as binary32.
  auto f32 = [](double v) { return static_cast<double>(static_cast<float>(v)); };
  auto vec = [&](const Vec3& v) { return Vec3{f32(v.x), f32(v.y), f32(v.z)}; };
  RecordedFrame out;
  out.timestamp = frame.timestamp;
  out.pose.position = vec(frame.pose.position);
  const Quaternion& q = frame.pose.orientation;
  out.pose.orientation = {f32(q.w), f32(q.x), f32(q.y), f32(q.z)};
  out.ambient = {f32(frame.ambient.intensity), frame.ambient.color};
  for (const Vec3& p : frame.estimation_positions) {
    out.estimation_positions.push_back(vec(p));
  }
  out.rgb.reserve(frame.rgb.pixels.size() * 3);
  for (const Rgb& c : frame.rgb.pixels) {
    out.rgb.push_back(QuantizeColor(c.r));
    out.rgb.push_back(QuantizeColor(c.g));
    out.rgb.push_back(QuantizeColor(c.b));
  }
  out.depth_mm.reserve(frame.depth.meters.size());
  for (float m : frame.depth.meters) {
    const double mm = std::round(static_cast<double>(m) * 1000.0);
    out.depth_mm.push_back(static_cast<std::uint16_t>(std::clamp(mm, 0.0, 65535.0)));
  }
  return out;
}

FrameInput ToFrameInput(const RecordedFrame& frame, const CameraIntrinsics& intrinsics) {
  const std::size_t pixels = static_cast<std::size_t>(intrinsics.width) * intrinsics.height;
  if (frame.rgb.size() != pixels * 3 || frame.depth_mm.size() != pixels) {
    throw InvalidArgument("recorded frame does not match the intrinsics");
  }
  FrameInput out;
  out.timestamp = frame.timestamp;
  out.pose = frame.pose;
  out.ambient = frame.ambient;
  out.estimation_positions = frame.estimation_positions;
  out.rgb = {intrinsics.width, intrinsics.height, {}};
  out.rgb.pixels.reserve(pixels);
  for (std::size_t i = 0; i < pixels; ++i) {
    out.rgb.pixels.push_back({frame.rgb[3 * i] / 255.0f, frame.rgb[3 * i + 1] / 255.0f,
                              frame.rgb[3 * i + 2] / 255.0f});
  }
  out.depth = {intrinsics.width, intrinsics.height, {}};
  out.depth.meters.reserve(pixels);
  for (std::uint16_t mm : frame.depth_mm) {
    out.depth.meters.push_back(static_cast<float>(mm / 1000.0));
  }
  return out;
}

Recording RecordSynthetic(const std::string& scenario, int frames, int width,
                          int height) {
  const SyntheticScene scene = MakeScenario(scenario, frames, width, height);
  Recording rec;
  rec.manifest.scenario = scenario;
  rec.manifest.synthetic = true;
  rec.manifest.frame_count = frames;
  rec.manifest.intrinsics = scene.intrinsics;
  rec.frames.reserve(frames);
  for (int i = 0; i < frames; ++i) {
    rec.frames.push_back(ToRecordedFrame(RenderFrame(scene, i)));
  }
  return rec;
}

void WriteRecording(const Recording& recording, const std::filesystem::path& dir) {
  const RecordingManifest& m = recording.manifest;
  if (static_cast<std::size_t>(m.frame_count) != recording.frames.size()) {
    throw InvalidArgument("manifest frame count does not match the frames");
  }
  const std::size_t pixels = static_cast<std::size_t>(m.intrinsics.width) * m.intrinsics.height;
  Writer w;
  for (const RecordedFrame& f : recording.frames) {
    if (f.rgb.size() != pixels * 3 || f.depth_mm.size() != pixels) {
      throw InvalidArgument("frame size does not match the manifest");
    }
    if (f.estimation_positions.size() > 0xffff) {
      throw InvalidArgument("too many estimation positions");
    }
    w.F64(f.timestamp);
    w.F32(f.pose.position.x);
    w.F32(f.pose.position.y);
    w.F32(f.pose.position.z);
    w.F32(f.pose.orientation.w);
    w.F32(f.pose.orientation.x);
    w.F32(f.pose.orientation.y);
    w.F32(f.pose.orientation.z);
    w.F32(f.ambient.intensity);
    w.F32(f.ambient.color.r);
    w.F32(f.ambient.color.g);
    w.F32(f.ambient.color.b);
    w.U16(static_cast<std::uint16_t>(f.estimation_positions.size()));
    for (const Vec3& p : f.estimation_positions) {
      w.F32(p.x);
      w.F32(p.y);
      w.F32(p.z);
    }
    for (std::uint8_t c : f.rgb) w.U8(c);
    for (std::uint16_t d : f.depth_mm) w.U16(d);
  }

  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "manifest.json");
    if (!out) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
    out << ManifestJson(m).dump(2) << '\n';
  }
  std::ofstream out(dir / "frames.bin", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (dir / "frames.bin").string());
  out.write(reinterpret_cast<const char*>(w.bytes().data()),
            static_cast<std::streamsize>(w.bytes().size()));
  if (!out) throw std::runtime_error("write failed for " + (dir / "frames.bin").string());
}

Recording ReadRecording(const std::filesystem::path& dir) {
  Recording rec;
  {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw std::runtime_error("cannot read " + (dir / "manifest.json").string());
    try {
      rec.manifest = ParseManifest(json::parse(in));
    } catch (const json::exception& e) {
      throw MalformedRecording(std::string("bad manifest: ") + e.what());
    }
  }
  std::ifstream in(dir / "frames.bin", std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + (dir / "frames.bin").string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  const CameraIntrinsics& k = rec.manifest.intrinsics;
  const std::size_t pixels = static_cast<std::size_t>(k.width) * k.height;
  Reader r(bytes);
  rec.frames.reserve(rec.manifest.frame_count);
  for (int i = 0; i < rec.manifest.frame_count; ++i) {
    RecordedFrame f;
    f.timestamp = r.F64();
    f.pose.position = {r.F32(), r.F32(), r.F32()};
    f.pose.orientation = {r.F32(), r.F32(), r.F32(), r.F32()};
    f.ambient.intensity = r.F32();
    f.ambient.color = {static_cast<float>(r.F32()), static_cast<float>(r.F32()),
                       static_cast<float>(r.F32())};
    const int count = r.U16();
    for (int p = 0; p < count; ++p) f.estimation_positions.push_back({r.F32(), r.F32(), r.F32()});
    r.Need(pixels * 3 + pixels * 2);
    f.rgb.resize(pixels * 3);
    for (auto& c : f.rgb) c = r.U8();
    f.depth_mm.resize(pixels);
    for (auto& d : f.depth_mm) d = r.U16();
    if (!rec.frames.empty() && !(f.timestamp > rec.frames.back().timestamp)) {
      throw MalformedRecording("timestamps must strictly increase (frame " +
                               std::to_string(i) + ")");
    }
    rec.frames.push_back(std::move(f));
  }
  if (!r.done()) {
    throw MalformedRecording("frames file has " +
                             std::to_string(bytes.size() - r.offset()) +
                             " trailing bytes");
  }
  return rec;
}

}  // namespace edgelight
