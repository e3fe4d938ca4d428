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

#include <cmath>
#include <memory>
#include <numbers>

#include <doctest.h>
#include <json.hpp>

#include "edgelight/client_pipeline.h"
#include "edgelight/errors.h"
#include "edgelight/synthetic_scene.h"

namespace edgelight {
namespace {

struct Shared {
  std::shared_ptr<const AnchorSet> anchors;
  std::shared_ptr<const AccelerationGrid> grid;
};

const Shared& DefaultAnchors() {
  static const Shared shared = [] {
    auto anchors = std::make_shared<const AnchorSet>(GenerateAnchors(1280));
    auto grid = std::make_shared<const AccelerationGrid>(BuildGrid(*anchors));
    return Shared{anchors, grid};
  }();
  return shared;
}

struct SmallScene {
  SyntheticScene scene = MakeScenario("static", 1, 64, 48);
  FrameInput frame = RenderFrame(scene, 0);

  FrameInput At(int i) const {
    FrameInput f = frame;
    f.timestamp = i / 30.0;
    return f;
  }
  ClientPipeline Pipeline(PipelineConfig config = {}) const {
    return ClientPipeline(DefaultAnchors().anchors, DefaultAnchors().grid,
                          scene.intrinsics, config);
  }
};

void Fill(FrameInput& f, Rgb color) {
  for (Rgb& c : f.rgb.pixels) c = color;
}

ShCoefficients Ramp() {
  ShCoefficients sh;
  for (int i = 0; i < kShValueCount; ++i) sh.values[i] = 0.1 * (i + 1);
  return sh;
}

AmbientSample Ambient(double lux, Rgb chroma) { return {lux, chroma}; }

TEST_CASE("static scene triggers once") {
  const SmallScene s;
  ClientPipeline pipeline = s.Pipeline();
  pipeline.AddPosition("p", s.scene.estimation_positions[0]);
  std::vector<int> fired;
  UnitSphereCloud persistent_after_first;
  for (int i = 0; i < 100; ++i) {
    const FrameResult r = pipeline.ProcessFrame(s.At(i));
    REQUIRE(r.outcomes.size() == 1);
    CHECK(r.outcomes[0].kind != OutcomeKind::kSkippedInactive);
    if (r.outcomes[0].kind == OutcomeKind::kTriggered) fired.push_back(i);
    if (i == 0) persistent_after_first = pipeline.positions()[0].persistent;
  }
  CHECK(fired == std::vector<int>{0});
  CHECK(persistent_after_first.initialized_count() > 0);
  CHECK(pipeline.positions()[0].persistent == persistent_after_first);
  CHECK(pipeline.sampling_invocations() == 100);
}

TEST_CASE("a light flip triggers again") {
  const SmallScene s;
  ClientPipeline pipeline = s.Pipeline();
  pipeline.AddPosition("p", s.scene.estimation_positions[0]);
  std::vector<int> fired;
  for (int i = 0; i < 100; ++i) {
    FrameInput f = s.At(i);
    Fill(f, i < 50 ? Rgb{1, 1, 1} : Rgb{0, 0, 0});
    if (pipeline.ProcessFrame(f).outcomes[0].kind == OutcomeKind::kTriggered) {
      fired.push_back(i);
    }
  }
  CHECK(fired == std::vector<int>{0, 50});
}

TEST_CASE("every-frame mode always triggers") {
  const SmallScene s;
  PipelineConfig config;
  config.trigger_every_frame = true;
  ClientPipeline pipeline = s.Pipeline(config);
  pipeline.AddPosition("p", s.scene.estimation_positions[0]);
  for (int i = 0; i < 5; ++i) {
    const FrameResult r = pipeline.ProcessFrame(s.At(i));
    CHECK(r.outcomes[0].kind == OutcomeKind::kTriggered);
    CHECK(r.outcomes[0].packet.size() ==
          EncodedSize(pipeline.positions()[0].temporary.initialized_count()));
  }
}

TEST_CASE("positions behind the camera are never sampled") {
  const SmallScene s;
  ClientPipeline pipeline = s.Pipeline();
  const CameraPose& pose = s.frame.pose;
  const Vec3 forward = pose.CameraToWorld({0, 0, 1}) - pose.position;
  pipeline.AddPosition("behind", pose.position - forward);
  for (int i = 0; i < 10; ++i) {
    const FrameResult r = pipeline.ProcessFrame(s.At(i));
    CHECK(r.outcomes[0].kind == OutcomeKind::kSkippedInactive);
    CHECK(r.outcomes[0].packet.empty());
  }
  CHECK(pipeline.sampling_invocations() == 0);
  CHECK(pipeline.backprojections() == 0);
  CHECK(pipeline.positions()[0].temporary.initialized_count() == 0);
}

TEST_CASE("one backprojection per frame serves every active position") {
  const SmallScene s;
  ClientPipeline pipeline = s.Pipeline();
  for (const Vec3& p : s.scene.estimation_positions) pipeline.AddPosition("p", p);
  REQUIRE(pipeline.positions().size() == 2);
  pipeline.ProcessFrame(s.At(0));
  pipeline.ProcessFrame(s.At(1));
  CHECK(pipeline.backprojections() == 2);
  CHECK(pipeline.sampling_invocations() == 4);
}

TEST_CASE("bad frames become error outcomes") {
  const SmallScene s;
  ClientPipeline pipeline = s.Pipeline();
  pipeline.AddPosition("p", s.scene.estimation_positions[0]);
  FrameInput f = s.At(0);
  f.depth.meters.pop_back();
  const FrameResult r = pipeline.ProcessFrame(f);
  CHECK(r.outcomes[0].kind == OutcomeKind::kError);
  CHECK_FALSE(r.outcomes[0].error.empty());
  CHECK(pipeline.positions()[0].temporary.initialized_count() == 0);
}

TEST_CASE("pipeline output is deterministic") {
  const SmallScene s;
  const SyntheticScene r3 = MakeScenario("r3", 12, 64, 48);
  ClientPipeline a = s.Pipeline();
  ClientPipeline b = s.Pipeline();
  a.AddPosition("p", r3.estimation_positions[0]);
  b.AddPosition("p", r3.estimation_positions[0]);
  for (int i = 0; i < r3.frame_count(); ++i) {
    const FrameInput f = RenderFrame(r3, i);
    const FrameResult ra = a.ProcessFrame(f);
    const FrameResult rb = b.ProcessFrame(f);
    CHECK(ra.outcomes[0].kind == rb.outcomes[0].kind);
    CHECK(ra.outcomes[0].packet == rb.outcomes[0].packet);
    CHECK(ra.outcomes[0].max_pooled == rb.outcomes[0].max_pooled);
  }
  CHECK(a.positions()[0].persistent == b.positions()[0].persistent);
}

TEST_CASE("pipeline rejects bad configuration") {
  const SmallScene s;
  PipelineConfig config;
  config.trigger.window = 17;
  CHECK_THROWS_AS(s.Pipeline(config), InvalidArgument);
  config.trigger.window = 4;
  config.trigger.theta = 0.0;
  CHECK_THROWS_AS(s.Pipeline(config), InvalidArgument);
  config.trigger_every_frame = true;
  CHECK_NOTHROW(s.Pipeline(config));
  auto small = std::make_shared<const AnchorSet>(GenerateAnchors(64));
  CHECK_THROWS_AS(ClientPipeline(small, DefaultAnchors().grid, s.scene.intrinsics, {}),
                  InvalidArgument);
}

TEST_CASE("compensation") {
  const Rgb grey{1.0f / 3, 1.0f / 3, 1.0f / 3};
  const ShCoefficients sh = Ramp();

  SUBCASE("unchanged ambient is the identity") {
    const ShCoefficients out = Compensate(sh, Ambient(800, grey), Ambient(800, grey));
    for (int i = 0; i < kShValueCount; ++i) CHECK(out.values[i] == doctest::Approx(sh.values[i]));
  }
  SUBCASE("intensity scales every channel") {
    const ShCoefficients out = Compensate(sh, Ambient(1000, grey), Ambient(1500, grey));
    for (int i = 0; i < kShValueCount; ++i) {
      CHECK(out.values[i] == doctest::Approx(1.5 * sh.values[i]));
    }
  }
  SUBCASE("intensity ratio is clamped") {
    const ShCoefficients up = Compensate(sh, Ambient(1000, grey), Ambient(9000, grey));
    const ShCoefficients down = Compensate(sh, Ambient(1000, grey), Ambient(10, grey));
    for (int i = 0; i < kShValueCount; ++i) {
      CHECK(up.values[i] == doctest::Approx(2.0 * sh.values[i]));
      CHECK(down.values[i] == doctest::Approx(0.5 * sh.values[i]));
    }
  }
  SUBCASE("chromaticity scales channels separately") {
    const ShCoefficients out =
        Compensate(sh, Ambient(1000, grey), Ambient(1000, {0.5f, 0.25f, 0.25f}));
    for (int k = 0; k < kShBasisCount; ++k) {
      CHECK(out.at(0, k) == doctest::Approx(1.5 * sh.at(0, k)));
      CHECK(out.at(1, k) == doctest::Approx(0.75 * sh.at(1, k)));
      CHECK(out.at(2, k) == doctest::Approx(0.75 * sh.at(2, k)));
    }
  }
  SUBCASE("a channel that was dark stays put") {
    const ShCoefficients out =
        Compensate(sh, Ambient(1000, {0.5f, 0.5f, 0.0f}), Ambient(1000, {0.4f, 0.4f, 0.2f}));
    for (int k = 0; k < kShBasisCount; ++k) {
      CHECK(out.at(0, k) == doctest::Approx(0.8 * sh.at(0, k)));
      CHECK(out.at(2, k) == doctest::Approx(sh.at(2, k)));
    }
  }
  SUBCASE("reference intensity must be positive") {
    CHECK_THROWS_AS(Compensate(sh, Ambient(0, grey), Ambient(10, grey)), InvalidArgument);
  }
}

TEST_CASE("activity test") {
  const CameraIntrinsics k{100, 100, 32, 24, 64, 48};
  const CameraPose identity;
  CHECK(IsActive({0, 0, 1}, identity, k));
  CHECK_FALSE(IsActive({0, 0, -1}, identity, k));
  CHECK_FALSE(IsActive({0, 0, 0}, identity, k));
  CHECK(IsActive({0.3199, 0, 1}, identity, k));
  CHECK_FALSE(IsActive({0.32, 0, 1}, identity, k));
  CHECK(IsActive({-0.32, -0.24, 1}, identity, k));
  CHECK_FALSE(IsActive({0, 0.24, 1}, identity, k));
  CHECK(IsActive({0.33, 0, 1}, identity, k, 10.0));
  CHECK_FALSE(IsActive({0, 0, -1}, identity, k, 10.0));

  // Turning the camera around swaps front and back.
  const CameraPose turned{{0, 0, 0}, Quaternion::FromAxisAngle({0, 1, 0}, std::numbers::pi)};
  CHECK(IsActive({0, 0, -1}, turned, k));
  CHECK_FALSE(IsActive({0, 0, 1}, turned, k));
}

TEST_CASE("stale responses are dropped") {
  PositionBuffers b;
  const AmbientSample a = Ambient(1000, {0.3f, 0.3f, 0.4f});
  CHECK_FALSE(b.CurrentLighting(a).has_value());
  ShCoefficients first = Ramp();
  ShCoefficients second = Ramp();
  second.values[0] = 7.0;
  CHECK(b.AcceptResponse(2.0, first, a));
  CHECK_FALSE(b.AcceptResponse(1.0, second, a));
  CHECK(b.last_response == first);
  CHECK(b.AcceptResponse(2.0, second, a));
  CHECK(b.AcceptResponse(3.0, first, a));
  CHECK(b.response_timestamp == 3.0);
  CHECK(*b.CurrentLighting(a) == first);
  const ShCoefficients brighter = *b.CurrentLighting(Ambient(1200, a.color));
  CHECK(brighter.values[3] == doctest::Approx(1.2 * first.values[3]));
}

TEST_CASE("log lines are json") {
  FrameResult frame;
  frame.timestamp = 1.5;
  PositionOutcome outcome;
  outcome.position_id = "pos-3";
  outcome.kind = OutcomeKind::kTriggered;
  outcome.packet = Bytes(17, 0);
  outcome.max_pooled = 0.75;
  const auto line = nlohmann::json::parse(FormatLogLine(frame, outcome));
  CHECK(line.at("timestamp") == 1.5);
  CHECK(line.at("position_id") == "pos-3");
  CHECK(line.at("outcome") == "triggered");
  CHECK(line.at("bytes_sent") == 17);
  CHECK(line.at("max_pooled") == 0.75);
  CHECK(line.at("timings_ms").contains("encode"));
  CHECK_FALSE(line.contains("error"));
  outcome.error = "boom";
  CHECK(nlohmann::json::parse(FormatLogLine(frame, outcome)).at("error") == "boom");
}

}  // namespace
}  // namespace edgelight
