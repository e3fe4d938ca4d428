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

#include "edgelight/client_pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "edgelight/errors.h"

namespace edgelight {
namespace {

using Clock = std::chrono::steady_clock;

double MillisSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double ClampRatio(double ratio) { return std::clamp(ratio, 0.5, 2.0); }

}  // namespace

ShCoefficients Compensate(const ShCoefficients& last_response,
                          const AmbientSample& ambient_then,
                          const AmbientSample& ambient_now) {
  if (!(ambient_then.intensity > 0.0)) {
    throw InvalidArgument("reference ambient intensity must be positive");
  }
  const double overall = ClampRatio(ambient_now.intensity / ambient_then.intensity);
  ShCoefficients out = last_response;
  for (int c = 0; c < kShChannelCount; ++c) {
    const double then = ambient_then.color[c];
    const double channel = then == 0.0 ? 1.0 : ClampRatio(ambient_now.color[c] / then);
    for (int k = 0; k < kShBasisCount; ++k) out.at(c, k) *= overall * channel;
  }
  return out;
}

bool IsActive(const Vec3& position, const CameraPose& pose,
              const CameraIntrinsics& intrinsics, double margin_degrees) {
  const Vec3 p = pose.WorldToCamera(position);
  if (!(p.z > 0.0)) return false;
  const double u = intrinsics.fx * p.x / p.z + intrinsics.cx;
  const double v = intrinsics.fy * p.y / p.z + intrinsics.cy;
  const double tan_margin = std::tan(margin_degrees * std::numbers::pi / 180.0);
  const double mu = intrinsics.fx * tan_margin;
  const double mv = intrinsics.fy * tan_margin;
  return u >= -mu && u < intrinsics.width + mu && v >= -mv &&
         v < intrinsics.height + mv;
}

bool PositionBuffers::AcceptResponse(double request_timestamp,
                                     const ShCoefficients& sh,
                                     const AmbientSample& ambient) {
  if (last_response && request_timestamp < response_timestamp) return false;
  last_response = sh;
  ambient_at_response = ambient;
  response_timestamp = request_timestamp;
  return true;
}

std::optional<ShCoefficients> PositionBuffers::CurrentLighting(
    const AmbientSample& now) const {
  if (!last_response) return std::nullopt;
  if (!ambient_at_response || !(ambient_at_response->intensity > 0.0)) {
    return last_response;
  }
  return Compensate(*last_response, *ambient_at_response, now);
}

std::string_view ToString(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::kSkippedInactive: return "skipped-inactive";
    case OutcomeKind::kBuffered: return "buffered";
    case OutcomeKind::kTriggered: return "triggered";
    case OutcomeKind::kError: return "error";
  }
  return "unknown";
}

ClientPipeline::ClientPipeline(std::shared_ptr<const AnchorSet> anchors,
                               std::shared_ptr<const AccelerationGrid> grid,
                               CameraIntrinsics intrinsics, PipelineConfig config)
    : anchors_(std::move(anchors)),
      grid_(std::move(grid)),
      intrinsics_(intrinsics),
      config_(config) {
  if (!anchors_ || !grid_) throw InvalidArgument("anchors and grid are required");
  if (grid_->anchor_count() != anchors_->count()) {
    throw InvalidArgument("grid was built over a different anchor set");
  }
  intrinsics_.Validate();
  if (!config_.trigger_every_frame) config_.trigger.Validate(*anchors_);
}

PositionBuffers& ClientPipeline::AddPosition(std::string position_id,
                                             const Vec3& world_position) {
  PositionBuffers buffers;
  buffers.position_id = std::move(position_id);
  buffers.world_position = world_position;
  buffers.temporary = UnitSphereCloud(anchors_->count());
  buffers.persistent = UnitSphereCloud(anchors_->count());
  positions_.push_back(std::move(buffers));
  return positions_.back();
}

FrameResult ClientPipeline::ProcessFrame(const FrameInput& frame) {
  const auto frame_start = Clock::now();
  FrameResult result;
  result.timestamp = frame.timestamp;
  result.outcomes.resize(positions_.size());

  std::vector<bool> active(positions_.size());
  bool any_active = false;
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    result.outcomes[i].position_id = positions_[i].position_id;
    active[i] = IsActive(positions_[i].world_position, frame.pose, intrinsics_,
                         config_.active_margin_degrees);
    any_active = any_active || active[i];
  }

  PointCloud world;
  double backproject_ms = 0.0;
  std::string frame_error;
  if (any_active) {
    const auto start = Clock::now();
    try {
      world = Backproject(frame.rgb, frame.depth, intrinsics_, frame.pose);
      ++backprojections_;
    } catch (const std::exception& e) {
      frame_error = e.what();
    }
    backproject_ms = MillisSince(start);
  }

  for (std::size_t i = 0; i < positions_.size(); ++i) {
    PositionOutcome& outcome = result.outcomes[i];
    if (!active[i]) {
      outcome.kind = OutcomeKind::kSkippedInactive;
      continue;
    }
    outcome.timings.backproject = backproject_ms;
    if (!frame_error.empty()) {
      outcome.kind = OutcomeKind::kError;
      outcome.error = frame_error;
      continue;
    }
    PositionBuffers& buffers = positions_[i];
    try {
      auto start = Clock::now();
      const UnitSphereCloud sampled = SphereSample(
          TranslateTo(world, buffers.world_position), *anchors_, *grid_);
      ++sampling_invocations_;
      outcome.timings.sample = MillisSince(start);

      start = Clock::now();
      MergeInto(buffers.temporary, sampled);
      outcome.timings.merge = MillisSince(start);

      start = Clock::now();
      bool fire = config_.trigger_every_frame;
      if (!fire) {
        const TriggerDecision decision =
            ShouldTrigger(buffers.temporary, buffers.persistent, *anchors_,
                          config_.trigger);
        fire = decision.fire;
        outcome.max_pooled = decision.max_pooled;
      }
      outcome.timings.trigger = MillisSince(start);

      if (fire) {
        start = Clock::now();
        MergeInto(buffers.persistent, buffers.temporary);
        outcome.packet = Encode(buffers.temporary);
        outcome.timings.encode = MillisSince(start);
        outcome.kind = OutcomeKind::kTriggered;
      } else {
        outcome.kind = OutcomeKind::kBuffered;
      }
    } catch (const std::exception& e) {
      outcome.kind = OutcomeKind::kError;
      outcome.error = e.what();
    }
  }
  result.processing_ms = MillisSince(frame_start);
  return result;
}

std::string FormatLogLine(const FrameResult& frame, const PositionOutcome& outcome) {
  nlohmann::json line = {
      {"timestamp", frame.timestamp},
      {"position_id", outcome.position_id},
      {"outcome", ToString(outcome.kind)},
      {"max_pooled", outcome.max_pooled},
      {"bytes_sent", outcome.packet.size()},
      {"timings_ms",
       {{"backproject", outcome.timings.backproject},
        {"sample", outcome.timings.sample},
        {"merge", outcome.timings.merge},
        {"trigger", outcome.timings.trigger},
        {"encode", outcome.timings.encode}}},
  };
  if (!outcome.error.empty()) line["error"] = outcome.error;
  return line.dump();
}

}  // namespace edgelight
