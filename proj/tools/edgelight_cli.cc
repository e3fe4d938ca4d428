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

// Command-line front end: synthetic recordings, replay, evaluation and the
// edge server.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "edgelight/client_pipeline.h"
#include "edgelight/codec.h"
#include "edgelight/edge_service.h"
#include "edgelight/errors.h"
#include "edgelight/http_service.h"
#include "edgelight/metrics.h"
#include "edgelight/replay.h"
#include "edgelight/sampling.h"
#include "edgelight/sphere_geometry.h"

namespace {

using namespace edgelight;

constexpr int kExitMalformedInput = 2;

struct GridSize {
  int width = kDefaultGridWidth;
  int height = kDefaultGridHeight;
};

GridSize ParseGrid(const std::string& text) {
  GridSize g;
  char x = 0;
  std::istringstream in(text);
  if (!(in >> g.width >> x >> g.height) || (x != 'x' && x != 'X') || !in.eof() ||
      g.width <= 0 || g.height <= 0) {
    throw InvalidArgument("grid must look like 1024x512, got '" + text + "'");
  }
  return g;
}

std::pair<std::string, int> ParseListen(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) throw InvalidArgument("listen address needs host:port");
  const std::string host = text.substr(0, colon);
  int port = 0;
  try {
    std::size_t used = 0;
    port = std::stoi(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) throw std::invalid_argument("port");
  } catch (const std::exception&) {
    throw InvalidArgument("bad port in '" + text + "'");
  }
  if (port < 0 || port > 65535) throw InvalidArgument("port out of range");
  return {host, port};
}

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

// ClientPipeline validates the result against its anchor set.
PipelineConfig MakePipelineConfig(double theta, int window) {
  PipelineConfig config;
  if (theta == 0.0) {
    config.trigger_every_frame = true;
  } else {
    config.trigger.theta = theta;
  }
  config.trigger.window = window;
  return config;
}

std::shared_ptr<const AnchorSet> MakeAnchors(int count) {
  return std::make_shared<const AnchorSet>(
      GenerateAnchors(count, std::min(kDefaultNeighborCapacity, count - 1)));
}

// record-synthetic

struct RecordArgs {
  std::string scenario = "r1";
  int frames = 300;
  int width = kDefaultFrameWidth;
  int height = kDefaultFrameHeight;
  std::string out;
};

int RunRecord(const RecordArgs& a) {
  if (a.frames <= 0) throw InvalidArgument("--frames must be positive");
  const Recording rec = RecordSynthetic(a.scenario, a.frames, a.width, a.height);
  WriteRecording(rec, a.out);
  std::cout << "wrote " << rec.frames.size() << " frames of scenario " << a.scenario
            << " to " << a.out << '\n';
  return 0;
}

// replay

struct ReplayArgs {
  std::string recording;
  std::string server;
  bool in_process = false;
  double theta = 0.6;
  int window = 4;
  int anchors = 0;
  std::string grid = "1024x512";
  std::string report;
  std::string timings;
  double latency_ms = 0.0;
  bool no_baseline = false;
};

int RunReplay(const ReplayArgs& a) {
  const Recording rec = ReadRecording(a.recording);
  ReplayConfig config;
  config.anchor_count = a.anchors;
  config.pipeline = MakePipelineConfig(a.theta, a.window);
  const GridSize grid = ParseGrid(a.grid);
  config.grid_width = grid.width;
  config.grid_height = grid.height;
  config.added_latency_ms = a.latency_ms;
  config.compare_to_baseline = !a.no_baseline;

  std::optional<EdgeService> service;
  std::unique_ptr<EdgeEndpoint> endpoint;
  if (a.in_process) {
    service.emplace();
    endpoint = std::make_unique<InProcessEndpoint>(*service);
  } else {
    endpoint = std::make_unique<HttpEndpoint>(a.server);
  }
  const ReplayReport report = Replay(rec, *endpoint, config);
  if (!a.report.empty()) {
    std::ofstream out = OpenOutput(a.report);
    report.WriteCsv(out);
  }
  if (!a.timings.empty()) {
    std::ofstream out = OpenOutput(a.timings);
    report.WriteTimingsCsv(out);
  }
  report.WriteSummary(std::cout);
  return 0;
}

// eval-entropy

struct EntropyArgs {
  std::string recording;
  std::string samplers = "uspc,random,fps";
  int k = kDefaultAnchorCount;
  int max_frames = 10;
  std::uint64_t seed = 1;
  std::string report;
};

int RunEvalEntropy(const EntropyArgs& a) {
  if (a.k <= 0) throw InvalidArgument("--k must be positive");
  std::vector<std::string> samplers;
  {
    std::istringstream in(a.samplers);
    for (std::string s; std::getline(in, s, ',');) {
      if (s != "uspc" && s != "random" && s != "fps") {
        throw InvalidArgument("unknown sampler '" + s + "'");
      }
      samplers.push_back(s);
    }
  }
  if (samplers.empty()) throw InvalidArgument("no samplers given");

  const Recording rec = ReadRecording(a.recording);
  const CameraIntrinsics& k = rec.manifest.intrinsics;
  const int anchor_count = a.k;
  auto anchors = MakeAnchors(anchor_count);
  const AccelerationGrid grid = BuildGrid(*anchors, kDefaultGridWidth, kDefaultGridHeight);

  std::map<std::string, std::vector<double>> relative;
  const int frames = std::min<int>(a.max_frames, static_cast<int>(rec.frames.size()));
  for (int f = 0; f < frames; ++f) {
    const FrameInput frame = ToFrameInput(rec.frames[f], k);
    const PointCloud world = Backproject(frame.rgb, frame.depth, k, frame.pose);
    for (const Vec3& position : frame.estimation_positions) {
      const PointCloud local = TranslateTo(world, position);
      const std::vector<Vec3> raw = PointDirections(local);
      if (raw.empty()) continue;
      // The baselines get as many points as sphere sampling kept.
      const std::vector<Vec3> uspc =
          InitializedDirections(SphereSample(local, *anchors, grid), *anchors);
      const std::size_t budget = uspc.size();
      for (const std::string& s : samplers) {
        std::vector<Vec3> sampled;
        if (s == "uspc") {
          sampled = uspc;
        } else if (s == "random") {
          sampled = PointDirections(UniformRandomDownsample(local, budget, a.seed + f));
        } else {
          sampled = PointDirections(FarthestPointDownsample(local, budget));
        }
        relative[s].push_back(RelativeEntropy(sampled, raw));
      }
    }
  }
  EvalReport report;
  for (const std::string& s : samplers) {
    const MeanStd m = ComputeMeanStd(relative[s]);
    report.Add("relative_entropy_" + s, m.mean, "ratio");
    report.Add("relative_entropy_" + s + "_std", m.std, "ratio");
    report.Add("relative_entropy_" + s + "_samples", static_cast<double>(m.count), "count");
  }
  report.WriteCsv(std::cout);
  if (!a.report.empty()) {
    std::ofstream out = OpenOutput(a.report);
    report.WriteCsv(out);
  }
  return 0;
}

// eval-mismatch

struct MismatchArgs {
  int anchors = kDefaultAnchorCount;
  std::string grid = "1024x512";
  std::size_t points = 1000000;
  double cube = 10.0;
  std::uint64_t seed = 1;
  std::string report;
};

int RunEvalMismatch(const MismatchArgs& a) {
  const GridSize g = ParseGrid(a.grid);
  if (a.points == 0) throw InvalidArgument("--points must be positive");
  if (!(a.cube > 0.0)) throw InvalidArgument("--cube must be positive");
  const auto anchors = MakeAnchors(a.anchors);
  const AccelerationGrid grid = BuildGrid(*anchors, g.width, g.height);
  const std::vector<Vec3> dirs = CubeDirections(a.points, a.cube, a.seed);
  EvalReport report;
  report.Add("mismatch_rate", MismatchRate(*anchors, grid, dirs), "fraction");
  report.Add("anchors", a.anchors, "count");
  report.Add("grid_cells", static_cast<double>(g.width) * g.height, "count");
  report.Add("points", static_cast<double>(a.points), "count");
  report.WriteCsv(std::cout);
  if (!a.report.empty()) {
    std::ofstream out = OpenOutput(a.report);
    report.WriteCsv(out);
  }
  return 0;
}

// eval-encoding

struct EncodingArgs {
  std::string recording;
  int anchors = 0;
  std::string report;
};

int RunEvalEncoding(const EncodingArgs& a) {
  const Recording rec = ReadRecording(a.recording);
  const CameraIntrinsics& k = rec.manifest.intrinsics;
  const int anchor_count = a.anchors > 0 ? a.anchors : rec.manifest.anchor_count;
  auto anchors = MakeAnchors(anchor_count);
  auto grid = std::make_shared<const AccelerationGrid>(
      BuildGrid(*anchors, kDefaultGridWidth, kDefaultGridHeight));

  // Single-view packets and the accumulated packets an every-frame client
  // would send.
  EncodingStats single;
  EncodingStats accumulated;
  const std::size_t raw_bytes = static_cast<std::size_t>(k.width) * k.height * 5;
  single.raw_frame_bytes = accumulated.raw_frame_bytes = raw_bytes;
  PipelineConfig config;
  config.trigger_every_frame = true;
  ClientPipeline pipeline(anchors, grid, k, config);
  if (!rec.frames.empty()) {
    int n = 0;
    for (const Vec3& p : rec.frames.front().estimation_positions) {
      pipeline.AddPosition("p" + std::to_string(n++), p);
    }
  }
  for (const RecordedFrame& recorded : rec.frames) {
    const FrameInput frame = ToFrameInput(recorded, k);
    const PointCloud world = Backproject(frame.rgb, frame.depth, k, frame.pose);
    for (const PositionBuffers& p : pipeline.positions()) {
      if (!IsActive(p.world_position, frame.pose, k)) continue;
      const Bytes packet =
          Encode(SphereSample(TranslateTo(world, p.world_position), *anchors, *grid));
      ++single.requests;
      single.total_bytes += packet.size();
    }
    for (const PositionOutcome& o : pipeline.ProcessFrame(frame).outcomes) {
      if (o.kind != OutcomeKind::kTriggered) continue;
      ++accumulated.requests;
      accumulated.total_bytes += o.packet.size();
    }
  }
  EvalReport report;
  report.Add("raw_frame_bytes", static_cast<double>(raw_bytes), "octets");
  report.Add("single_view_requests", static_cast<double>(single.requests), "count");
  report.Add("single_view_mean_bytes", single.mean_bytes(), "octets");
  report.Add("single_view_reduction", single.reduction(), "ratio");
  report.Add("accumulated_requests", static_cast<double>(accumulated.requests), "count");
  report.Add("accumulated_mean_bytes", accumulated.mean_bytes(), "octets");
  report.Add("accumulated_reduction", accumulated.reduction(), "ratio");
  report.WriteCsv(std::cout);
  if (!a.report.empty()) {
    std::ofstream out = OpenOutput(a.report);
    report.WriteCsv(out);
  }
  return 0;
}

// bench-pipeline

struct BenchArgs {
  std::string recording;
  double theta = 0.6;
  int window = 4;
  int anchors = 0;
  int repeat = 1;
  std::string report;
};

int RunBench(const BenchArgs& a) {
  if (a.repeat <= 0) throw InvalidArgument("--repeat must be positive");
  const Recording rec = ReadRecording(a.recording);
  const CameraIntrinsics& k = rec.manifest.intrinsics;
  const int anchor_count = a.anchors > 0 ? a.anchors : rec.manifest.anchor_count;
  auto anchors = MakeAnchors(anchor_count);
  auto grid = std::make_shared<const AccelerationGrid>(
      BuildGrid(*anchors, kDefaultGridWidth, kDefaultGridHeight));
  const PipelineConfig config = MakePipelineConfig(a.theta, a.window);

  std::vector<FrameInput> frames;
  frames.reserve(rec.frames.size());
  for (const RecordedFrame& f : rec.frames) frames.push_back(ToFrameInput(f, k));

  std::vector<double> frame_ms, backproject, sample, merge, trigger, encode;
  std::size_t triggered = 0;
  for (int r = 0; r < a.repeat; ++r) {
    ClientPipeline pipeline(anchors, grid, k, config);
    if (!frames.empty()) {
      int n = 0;
      for (const Vec3& p : frames.front().estimation_positions) {
        pipeline.AddPosition("p" + std::to_string(n++), p);
      }
    }
    for (const FrameInput& frame : frames) {
      const FrameResult result = pipeline.ProcessFrame(frame);
      frame_ms.push_back(result.processing_ms);
      for (const PositionOutcome& o : result.outcomes) {
        if (o.kind == OutcomeKind::kSkippedInactive || o.kind == OutcomeKind::kError) continue;
        backproject.push_back(o.timings.backproject);
        sample.push_back(o.timings.sample);
        merge.push_back(o.timings.merge);
        trigger.push_back(o.timings.trigger);
        if (o.kind == OutcomeKind::kTriggered) {
          encode.push_back(o.timings.encode);
          ++triggered;
        }
      }
    }
  }
  EvalReport report;
  report.AddTiming(SummarizeTimings("client_frame", frame_ms));
  report.AddTiming(SummarizeTimings("backproject", backproject));
  report.AddTiming(SummarizeTimings("sample", sample));
  report.AddTiming(SummarizeTimings("merge", merge));
  report.AddTiming(SummarizeTimings("trigger", trigger));
  report.AddTiming(SummarizeTimings("encode", encode));
  report.Add("frames", static_cast<double>(frame_ms.size()), "count");
  report.Add("triggered", static_cast<double>(triggered), "count");
  report.WriteCsv(std::cout);
  if (!a.report.empty()) {
    std::ofstream out = OpenOutput(a.report);
    report.WriteCsv(out);
  }
  return 0;
}

// serve

struct ServeArgs {
  std::string listen = "127.0.0.1:8080";
  std::string anchor_counts = "512-4096";
  std::string estimator = "analytic";
  std::string snapshot;
};

int RunServe(const ServeArgs& a) {
  const auto [host, port] = ParseListen(a.listen);
  EdgeServiceOptions options;
  options.anchor_counts = AnchorCountPolicy::Parse(a.anchor_counts);
  options.estimator = MakeEstimator(a.estimator);
  EdgeService service(std::move(options));
  if (!a.snapshot.empty() && std::filesystem::exists(a.snapshot)) {
    service.LoadSnapshot(a.snapshot);
    std::cerr << "loaded " << service.session_count() << " sessions from " << a.snapshot
              << '\n';
  }

  // Block the shutdown signals before any thread starts so only sigwait
  // sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  HttpEdgeServer server(service);
  const int bound = server.Start(host, port);
  std::cerr << "listening on " << host << ':' << bound << '\n';
  int received = 0;
  sigwait(&signals, &received);
  server.Stop();
  if (!a.snapshot.empty()) {
    service.WriteSnapshot(a.snapshot);
    std::cerr << "wrote snapshot " << a.snapshot << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge-assisted lighting estimation toolkit"};
  app.require_subcommand(1);

  RecordArgs record;
  auto* rec_cmd = app.add_subcommand("record-synthetic", "Render a synthetic scenario");
  rec_cmd->add_option("--scenario", record.scenario, "static, r1, r2 or r3")
      ->check(CLI::IsMember({"static", "r1", "r2", "r3"}));
  rec_cmd->add_option("--frames", record.frames, "Frame count");
  rec_cmd->add_option("--width", record.width, "Frame width");
  rec_cmd->add_option("--height", record.height, "Frame height");
  rec_cmd->add_option("--out", record.out, "Output directory")->required();

  ReplayArgs replay;
  auto* replay_cmd = app.add_subcommand("replay", "Replay a recording against an edge server");
  replay_cmd->add_option("--recording", replay.recording)->required();
  auto* server_opt = replay_cmd->add_option("--server", replay.server, "Base URL");
  auto* in_process_opt =
      replay_cmd->add_flag("--in-process", replay.in_process, "Use an in-process service");
  server_opt->excludes(in_process_opt);
  replay_cmd->add_option("--theta", replay.theta, "Trigger threshold; 0 sends every frame");
  replay_cmd->add_option("--window", replay.window, "Pooling window");
  replay_cmd->add_option("--anchors", replay.anchors, "Anchor count (default: recording)");
  replay_cmd->add_option("--grid", replay.grid, "Acceleration grid WxH");
  replay_cmd->add_option("--report", replay.report, "Per-position CSV");
  replay_cmd->add_option("--timings", replay.timings, "Stage timing CSV");
  replay_cmd->add_option("--latency-ms", replay.latency_ms, "Added latency per request");
  replay_cmd->add_flag("--no-baseline", replay.no_baseline, "Skip the every-frame pass");

  EntropyArgs entropy;
  auto* entropy_cmd = app.add_subcommand("eval-entropy", "Relative entropy per sampler");
  entropy_cmd->add_option("--recording", entropy.recording)->required();
  entropy_cmd->add_option("--samplers", entropy.samplers, "Comma list of uspc,random,fps");
  entropy_cmd->add_option("--k", entropy.k, "Anchor count; baselines draw the same number of points");
  entropy_cmd->add_option("--max-frames", entropy.max_frames, "Frames to evaluate");
  entropy_cmd->add_option("--seed", entropy.seed);
  entropy_cmd->add_option("--report", entropy.report);

  MismatchArgs mismatch;
  auto* mismatch_cmd = app.add_subcommand("eval-mismatch", "Grid lookup mismatch rate");
  mismatch_cmd->add_option("--anchors", mismatch.anchors);
  mismatch_cmd->add_option("--grid", mismatch.grid);
  mismatch_cmd->add_option("--points", mismatch.points);
  mismatch_cmd->add_option("--cube", mismatch.cube, "Cube edge, meters");
  mismatch_cmd->add_option("--seed", mismatch.seed);
  mismatch_cmd->add_option("--report", mismatch.report);

  EncodingArgs encoding;
  auto* encoding_cmd = app.add_subcommand("eval-encoding", "Packet sizes for a recording");
  encoding_cmd->add_option("--recording", encoding.recording)->required();
  encoding_cmd->add_option("--anchors", encoding.anchors);
  encoding_cmd->add_option("--report", encoding.report);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench-pipeline", "Client per-frame timings");
  bench_cmd->add_option("--recording", bench.recording)->required();
  bench_cmd->add_option("--theta", bench.theta, "Trigger threshold; 0 sends every frame");
  bench_cmd->add_option("--window", bench.window);
  bench_cmd->add_option("--anchors", bench.anchors);
  bench_cmd->add_option("--repeat", bench.repeat);
  bench_cmd->add_option("--report", bench.report);

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the edge server");
  serve_cmd->add_option("--listen", serve.listen, "host:port")->envname("EDGELIGHT_LISTEN");
  serve_cmd->add_option("--anchor-counts", serve.anchor_counts, "Range a-b or list a,b")
      ->envname("EDGELIGHT_ANCHOR_COUNTS");
  serve_cmd->add_option("--estimator", serve.estimator)->envname("EDGELIGHT_ESTIMATOR");
  serve_cmd->add_option("--snapshot", serve.snapshot, "Load at start, write at shutdown")
      ->envname("EDGELIGHT_SNAPSHOT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitMalformedInput;
  }
  if (replay_cmd->parsed() && replay.server.empty() && !replay.in_process) {
    std::cerr << "replay needs --server URL or --in-process\n";
    return kExitMalformedInput;
  }

  try {
    if (rec_cmd->parsed()) return RunRecord(record);
    if (replay_cmd->parsed()) return RunReplay(replay);
    if (entropy_cmd->parsed()) return RunEvalEntropy(entropy);
    if (mismatch_cmd->parsed()) return RunEvalMismatch(mismatch);
    if (encoding_cmd->parsed()) return RunEvalEncoding(encoding);
    if (bench_cmd->parsed()) return RunBench(bench);
    if (serve_cmd->parsed()) return RunServe(serve);
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitMalformedInput;
  } catch (const MalformedRecording& e) {
    std::cerr << "malformed recording: " << e.what() << '\n';
    return kExitMalformedInput;
  } catch (const MalformedPacket& e) {
    std::cerr << "malformed packet: " << e.what() << '\n';
    return kExitMalformedInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
