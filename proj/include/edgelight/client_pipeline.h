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

#ifndef EDGELIGHT_CLIENT_PIPELINE_H_
#define EDGELIGHT_CLIENT_PIPELINE_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "edgelight/codec.h"
#include "edgelight/estimator.h"
#include "edgelight/sampling.h"
#include "edgelight/sphere_geometry.h"
#include "edgelight/trigger.h"

namespace edgelight {

struct AmbientSample {
  double intensity = 0.0;  // lux
  Rgb color;

  friend constexpr bool operator==(const AmbientSample&,
                                   const AmbientSample&) = default;
};

struct FrameInput {
  double timestamp = 0.0;  // seconds
  RgbImage rgb;
  DepthImage depth;
  CameraPose pose;
  AmbientSample ambient;
  std::vector<Vec3> estimation_positions;  // as recorded; informational
};

// Scales every coefficient by the clamped intensity ratio now/then and each
// channel by its clamped color ratio. Ratios are clamped to [0.5, 2]; a
// channel whose earlier color is zero is left unscaled. Throws
// InvalidArgument if the earlier intensity is not positive.
ShCoefficients Compensate(const ShCoefficients& last_response,
                          const AmbientSample& ambient_then,
                          const AmbientSample& ambient_now);

// True when the world position lies in front of the camera and projects
// inside the image, widened on each side by `margin_degrees`.
bool IsActive(const Vec3& position, const CameraPose& pose,
              const CameraIntrinsics& intrinsics, double margin_degrees = 0.0);

struct PositionBuffers {
  std::string position_id;
  Vec3 world_position;
  UnitSphereCloud temporary;
  UnitSphereCloud persistent;
  std::optional<ShCoefficients> last_response;
  std::optional<AmbientSample> ambient_at_response;
  double response_timestamp = 0.0;  // request time of last_response

  // Records a server response unless a response for a later request has
  // already been accepted. Returns whether it was kept.
  bool AcceptResponse(double request_timestamp, const ShCoefficients& sh,
                      const AmbientSample& ambient);

  // The lighting to render now: the last response compensated to the
  // current ambient sample, if there is a response.
  std::optional<ShCoefficients> CurrentLighting(const AmbientSample& now) const;
};

enum class OutcomeKind { kSkippedInactive, kBuffered, kTriggered, kError };

std::string_view ToString(OutcomeKind kind);

// Milliseconds spent per pipeline stage for one position on one frame.
struct StageTimings {
  double backproject = 0.0;  // shared by every active position of the frame
  double sample = 0.0;       // translate + sphere sampling
  double merge = 0.0;
  double trigger = 0.0;
  double encode = 0.0;

  double total() const { return backproject + sample + merge + trigger + encode; }
};

struct PositionOutcome {
  std::string position_id;
  OutcomeKind kind = OutcomeKind::kSkippedInactive;
  double max_pooled = 0.0;
  Bytes packet;  // set when triggered
  std::string error;
  StageTimings timings;
};

struct FrameResult {
  double timestamp = 0.0;
  std::vector<PositionOutcome> outcomes;  // one per position, in order
  double processing_ms = 0.0;             // whole frame, wall clock
};

struct PipelineConfig {
  TriggerConfig trigger;
  // Sends every frame regardless of the trigger (the evaluation baseline).
  bool trigger_every_frame = false;
  double active_margin_degrees = 0.0;
};

// Per-session client state machine. For each active position of a frame:
// back-project, re-center on the position, sphere-sample, merge into the
// temporary buffer, compare against the persistent buffer and, on a trigger,
// promote the temporary buffer and emit it as a packet. Frames must be fed
// in order from one thread.
class ClientPipeline {
 public:
  ClientPipeline(std::shared_ptr<const AnchorSet> anchors,
                 std::shared_ptr<const AccelerationGrid> grid,
                 CameraIntrinsics intrinsics, PipelineConfig config);

  PositionBuffers& AddPosition(std::string position_id, const Vec3& world_position);

  FrameResult ProcessFrame(const FrameInput& frame);

  std::vector<PositionBuffers>& positions() { return positions_; }
  const std::vector<PositionBuffers>& positions() const { return positions_; }
  const AnchorSet& anchors() const { return *anchors_; }
  const PipelineConfig& config() const { return config_; }

  // Number of sphere-sampling runs so far.
  std::uint64_t sampling_invocations() const { return sampling_invocations_; }
  std::uint64_t backprojections() const { return backprojections_; }

 private:
  std::shared_ptr<const AnchorSet> anchors_;
  std::shared_ptr<const AccelerationGrid> grid_;
  CameraIntrinsics intrinsics_;
  PipelineConfig config_;
  std::vector<PositionBuffers> positions_;
  std::uint64_t sampling_invocations_ = 0;
  std::uint64_t backprojections_ = 0;
};

// One JSON line per position outcome.
std::string FormatLogLine(const FrameResult& frame, const PositionOutcome& outcome);

}  // namespace edgelight

#endif  // EDGELIGHT_CLIENT_PIPELINE_H_
