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

#include "edgelight/replay.h"

#include <chrono>
#include <cstdio>
#include <memory>
#include <thread>

#include "edgelight/errors.h"

namespace edgelight {
namespace {

using Clock = std::chrono::steady_clock;
using Trace = std::vector<std::vector<std::optional<ShCoefficients>>>;

struct PassResult {
  std::vector<PositionReport> positions;
  Trace lighting;  // [position][frame]
  ReplayReport timings;
};

PassResult RunPass(const Recording& recording, EdgeEndpoint& endpoint,
                   std::shared_ptr<const AnchorSet> anchors,
                   std::shared_ptr<const AccelerationGrid> grid,
                   const PipelineConfig& pipeline_config, double added_latency_ms) {
  const CameraIntrinsics& intrinsics = recording.manifest.intrinsics;
  ClientPipeline pipeline(anchors, grid, intrinsics, pipeline_config);
  PassResult pass;
  const std::string session = endpoint.CreateSession(anchors->count());
  if (!recording.frames.empty()) {
    for (const Vec3& p : recording.frames.front().estimation_positions) {
      pipeline.AddPosition(endpoint.RegisterPosition(session, p), p);
    }
  }
  const std::size_t n = pipeline.positions().size();
  pass.positions.resize(n);
  pass.lighting.assign(n, std::vector<std::optional<ShCoefficients>>(recording.frames.size()));
  for (std::size_t i = 0; i < n; ++i) {
    pass.positions[i].position_id = pipeline.positions()[i].position_id;
  }

  for (std::size_t f = 0; f < recording.frames.size(); ++f) {
    const FrameInput frame = ToFrameInput(recording.frames[f], intrinsics);
    const FrameResult result = pipeline.ProcessFrame(frame);
    pass.timings.client_frame_ms.push_back(result.processing_ms);
    for (std::size_t i = 0; i < n; ++i) {
      const PositionOutcome& outcome = result.outcomes[i];
      PositionReport& report = pass.positions[i];
      PositionBuffers& buffers = pipeline.positions()[i];
      ++report.frames;
      switch (outcome.kind) {
        case OutcomeKind::kSkippedInactive: ++report.skipped_inactive; break;
        case OutcomeKind::kBuffered: ++report.buffered; break;
        case OutcomeKind::kTriggered: ++report.triggered; break;
        case OutcomeKind::kError: ++report.errors; break;
      }
      if (outcome.kind == OutcomeKind::kBuffered || outcome.kind == OutcomeKind::kTriggered) {
        pass.timings.backproject_ms.push_back(outcome.timings.backproject);
        pass.timings.sample_ms.push_back(outcome.timings.sample);
        pass.timings.merge_ms.push_back(outcome.timings.merge);
        pass.timings.trigger_ms.push_back(outcome.timings.trigger);
      }
      if (outcome.kind == OutcomeKind::kTriggered) {
        pass.timings.encode_ms.push_back(outcome.timings.encode);
        report.bytes_sent += outcome.packet.size();
        if (added_latency_ms > 0.0) {
          std::this_thread::sleep_for(
              std::chrono::duration<double, std::milli>(added_latency_ms));
        }
        const auto start = Clock::now();
        try {
          const ShCoefficients sh =
              endpoint.Estimate(session, buffers.position_id, outcome.packet);
          buffers.AcceptResponse(frame.timestamp, sh, frame.ambient);
        } catch (const std::exception&) {
          ++report.send_errors;
        }
        pass.timings.round_trip_ms.push_back(
            std::chrono::duration<double, std::milli>(Clock::now() - start).count());
      }
      pass.lighting[i][f] = buffers.CurrentLighting(frame.ambient);
    }
  }
  return pass;
}

bool SameLight(const LightState& a, const LightState& b) {
  return a.position == b.position && a.temperature_kelvin == b.temperature_kelvin &&
         a.intensity == b.intensity;
}

std::string Fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

ReplayReport Replay(const Recording& recording, EdgeEndpoint& endpoint,
                    const ReplayConfig& config) {
  return Replay(recording, endpoint, config, nullptr);
}

ReplayReport Replay(const Recording& recording, EdgeEndpoint& endpoint,
                    const ReplayConfig& config, LightingTrace* trace) {
  const int anchor_count =
      config.anchor_count > 0 ? config.anchor_count : recording.manifest.anchor_count;
  const int capacity = std::min(kDefaultNeighborCapacity, anchor_count - 1);
  auto anchors = std::make_shared<const AnchorSet>(GenerateAnchors(anchor_count, capacity));
  auto grid = std::make_shared<const AccelerationGrid>(
      BuildGrid(*anchors, config.grid_width, config.grid_height));

  PassResult main = RunPass(recording, endpoint, anchors, grid, config.pipeline,
                            config.added_latency_ms);

  ReplayReport report = std::move(main.timings);
  report.scenario = recording.manifest.scenario;
  report.theta = config.pipeline.trigger_every_frame ? 0.0 : config.pipeline.trigger.theta;
  report.window = config.pipeline.trigger.window;
  report.anchor_count = anchor_count;
  report.positions = std::move(main.positions);
  const std::size_t n = report.positions.size();
  const std::size_t frames = recording.frames.size();

  if (config.compare_to_ground_truth && recording.manifest.synthetic && !recording.frames.empty()) {
    const CameraIntrinsics& k = recording.manifest.intrinsics;
    const SyntheticScene scene =
        MakeScenario(recording.manifest.scenario, static_cast<int>(frames), k.width, k.height);
    const auto& positions = recording.frames.front().estimation_positions;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> errors;
      std::optional<ShCoefficients> truth;
      for (std::size_t f = 0; f < frames; ++f) {
        // Ground truth only depends on the light, not on the camera.
        if (!truth || !SameLight(scene.lights[f], scene.lights[f - 1])) {
          truth = GroundTruthSh(scene, positions[i], static_cast<int>(f));
        }
        if (main.lighting[i][f]) errors.push_back(ShRmse(*main.lighting[i][f], *truth));
      }
      report.positions[i].rmse_ground_truth = ComputeMeanStd(errors);
    }
  }

  if (config.compare_to_baseline && !config.pipeline.trigger_every_frame) {
    PipelineConfig baseline_config = config.pipeline;
    baseline_config.trigger_every_frame = true;
    PassResult baseline = RunPass(recording, endpoint, anchors, grid, baseline_config,
                                  config.added_latency_ms);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> errors;
      for (std::size_t f = 0; f < frames; ++f) {
        if (main.lighting[i][f] && baseline.lighting[i][f]) {
          errors.push_back(ShRmse(*main.lighting[i][f], *baseline.lighting[i][f]));
        }
      }
      report.positions[i].rmse_baseline = ComputeMeanStd(errors);
    }
  }

  if (trace != nullptr) trace->per_position = std::move(main.lighting);
  return report;
}

void ReplayReport::WriteCsv(std::ostream& out) const {
  out << "scenario,position_id,theta,window,anchors,frames,triggered,buffered,"
         "skipped_inactive,errors,triggered_pct,buffered_pct,skipped_pct,errors_pct,"
         "send_errors,bytes_sent,rmse_gt_mean,rmse_gt_std,rmse_gt_frames,"
         "rmse_baseline_mean,rmse_baseline_std,rmse_baseline_frames\n";
  for (const PositionReport& p : positions) {
    out << scenario << ',' << p.position_id << ',' << Fixed(theta, 3) << ',' << window
        << ',' << anchor_count << ',' << p.frames << ',' << p.triggered << ','
        << p.buffered << ',' << p.skipped_inactive << ',' << p.errors << ','
        << Fixed(100.0 * p.Fraction(p.triggered), 4) << ','
        << Fixed(100.0 * p.Fraction(p.buffered), 4) << ','
        << Fixed(100.0 * p.Fraction(p.skipped_inactive), 4) << ','
        << Fixed(100.0 * p.Fraction(p.errors), 4) << ',' << p.send_errors << ','
        << p.bytes_sent << ',' << Fixed(p.rmse_ground_truth.mean) << ','
        << Fixed(p.rmse_ground_truth.std) << ',' << p.rmse_ground_truth.count << ','
        << Fixed(p.rmse_baseline.mean) << ',' << Fixed(p.rmse_baseline.std) << ','
        << p.rmse_baseline.count << '\n';
  }
}

void ReplayReport::WriteTimingsCsv(std::ostream& out) const {
  out << "stage,p50_ms,p95_ms,samples\n";
  const std::pair<const char*, const std::vector<double>*> stages[] = {
      {"client_frame", &client_frame_ms}, {"backproject", &backproject_ms},
      {"sample", &sample_ms},             {"merge", &merge_ms},
      {"trigger", &trigger_ms},           {"encode", &encode_ms},
      {"round_trip", &round_trip_ms}};
  for (const auto& [name, samples] : stages) {
    const TimingSummary t = SummarizeTimings(name, *samples);
    out << name << ',' << Fixed(t.p50_ms, 4) << ',' << Fixed(t.p95_ms, 4) << ','
        << t.samples << '\n';
  }
}

void ReplayReport::WriteSummary(std::ostream& out) const {
  out << "scenario " << scenario << ", theta " << Fixed(theta, 2) << ", window " << window
      << ", " << anchor_count << " anchors\n";
  for (const PositionReport& p : positions) {
    out << "  " << p.position_id << ": " << p.frames << " frames, triggered "
        << Fixed(100.0 * p.Fraction(p.triggered), 2) << "%, buffered "
        << Fixed(100.0 * p.Fraction(p.buffered), 2) << "%, inactive "
        << Fixed(100.0 * p.Fraction(p.skipped_inactive), 2) << "%, " << p.bytes_sent
        << " bytes sent";
    if (p.rmse_ground_truth.count > 0) {
      out << ", RMSE vs truth " << Fixed(p.rmse_ground_truth.mean, 4) << " +- "
          << Fixed(p.rmse_ground_truth.std, 4);
    }
    if (p.rmse_baseline.count > 0) {
      out << ", RMSE vs every-frame " << Fixed(p.rmse_baseline.mean, 4) << " +- "
          << Fixed(p.rmse_baseline.std, 4);
    }
    if (p.errors + p.send_errors > 0) {
      out << ", " << p.errors << " pipeline errors, " << p.send_errors << " send errors";
    }
    out << '\n';
  }
  const TimingSummary frame = SummarizeTimings("client_frame", client_frame_ms);
  out << "  client frame p50 " << Fixed(frame.p50_ms, 2) << " ms, p95 "
      << Fixed(frame.p95_ms, 2) << " ms\n";
}

}  // namespace edgelight
