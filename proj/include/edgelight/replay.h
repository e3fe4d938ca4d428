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

#ifndef EDGELIGHT_REPLAY_H_
#define EDGELIGHT_REPLAY_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "edgelight/client_pipeline.h"
#include "edgelight/http_service.h"
#include "edgelight/metrics.h"
#include "edgelight/sampling.h"
#include "edgelight/synthetic_scene.h"

namespace edgelight {

struct RecordingManifest {
  int format_version = 1;
  std::string scenario;  // scenario name for synthetic recordings, else free text
  bool synthetic = false;
  int frame_count = 0;
  CameraIntrinsics intrinsics;
  int anchor_count = kDefaultAnchorCount;
  std::string depth_unit = "millimeters";

  friend bool operator==(const RecordingManifest&,
                         const RecordingManifest&) = default;
};

// A frame as stored on disk: 8-bit color and 16-bit millimeter depth.
struct RecordedFrame {
  double timestamp = 0.0;
  CameraPose pose;
  AmbientSample ambient;
  std::vector<Vec3> estimation_positions;
  std::vector<std::uint8_t> rgb;        // width * height * 3, row-major
  std::vector<std::uint16_t> depth_mm;  // width * height, row-major

  friend bool operator==(const RecordedFrame&, const RecordedFrame&) = default;
};

struct Recording {
  RecordingManifest manifest;
  std::vector<RecordedFrame> frames;

  friend bool operator==(const Recording&, const Recording&) = default;
};

// Quantizes a rendered frame into its stored form. Depths round to the
// nearest millimeter and saturate at 65535.
RecordedFrame ToRecordedFrame(const FrameInput& frame);
FrameInput ToFrameInput(const RecordedFrame& frame, const CameraIntrinsics& intrinsics);

// Renders every frame of a scenario.
Recording RecordSynthetic(const std::string& scenario, int frames,
                          int width = kDefaultFrameWidth,
                          int height = kDefaultFrameHeight);

// Writes <dir>/manifest.json and <dir>/frames.bin. Frame records are
// little-endian: timestamp f64; position 3 x f32; orientation w,x,y,z f32;
// ambient lux f32 and color 3 x f32; u16 position count and 3 x f32 each;
// RGB octets; depth u16 millimeters.
void WriteRecording(const Recording& recording, const std::filesystem::path& dir);
// Throws MalformedRecording on a bad manifest or a frames file whose length
// does not match, and std::runtime_error on I/O failure.
Recording ReadRecording(const std::filesystem::path& dir);

struct ReplayConfig {
  PipelineConfig pipeline;
  int anchor_count = 0;  // 0 uses the recording's
  int grid_width = kDefaultGridWidth;
  int grid_height = kDefaultGridHeight;
  // Also run a send-every-frame pass and report RMSE against it.
  bool compare_to_baseline = true;
  // Compare against GroundTruthSh when the recording is synthetic.
  bool compare_to_ground_truth = true;
  double added_latency_ms = 0.0;
};

struct PositionReport {
  std::string position_id;
  int frames = 0;
  int triggered = 0;
  int buffered = 0;
  int skipped_inactive = 0;
  int errors = 0;
  int send_errors = 0;
  std::size_t bytes_sent = 0;
  MeanStd rmse_ground_truth;
  MeanStd rmse_baseline;

  double Fraction(int n) const { return frames == 0 ? 0.0 : static_cast<double>(n) / frames; }
};

struct ReplayReport {
  std::string scenario;
  double theta = 0.0;
  int window = 0;
  int anchor_count = 0;
  std::vector<PositionReport> positions;
  // Per-frame timing samples, milliseconds.
  std::vector<double> client_frame_ms;
  std::vector<double> backproject_ms;
  std::vector<double> sample_ms;
  std::vector<double> merge_ms;
  std::vector<double> trigger_ms;
  std::vector<double> encode_ms;
  std::vector<double> round_trip_ms;

  // Deterministic part: one row per position, fixed columns.
  void WriteCsv(std::ostream& out) const;
  void WriteTimingsCsv(std::ostream& out) const;
  void WriteSummary(std::ostream& out) const;
};

// Drives a ClientPipeline over the recording against `endpoint`. Each run
// opens a fresh session. Transport and protocol failures are counted per
// frame and do not stop the replay.
ReplayReport Replay(const Recording& recording, EdgeEndpoint& endpoint,
                    const ReplayConfig& config);

// Per-frame lighting a client would render during a replay, per position;
// nullopt before the first response.
struct LightingTrace {
  std::vector<std::vector<std::optional<ShCoefficients>>> per_position;
};

ReplayReport Replay(const Recording& recording, EdgeEndpoint& endpoint,
                    const ReplayConfig& config, LightingTrace* trace);

}  // namespace edgelight

#endif  // EDGELIGHT_REPLAY_H_
