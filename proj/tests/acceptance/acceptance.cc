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

// Acceptance run: one PASS/FAIL line per criterion. The CLI path is argv[1].

#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "edgelight/codec.h"
#include "edgelight/edge_service.h"
#include "edgelight/errors.h"
#include "edgelight/estimator.h"
#include "edgelight/half.h"
#include "edgelight/http_service.h"
#include "edgelight/metrics.h"
#include "edgelight/replay.h"
#include "edgelight/sampling.h"
#include "edgelight/sphere_geometry.h"
#include "edgelight/trigger.h"

namespace {

using namespace edgelight;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Collects failed checks for one criterion.
class Checker {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void Note(const std::string& detail) { notes_.push_back(detail); }
  bool ok() const { return failures_.empty(); }
  std::string Detail() const {
    std::string out;
    for (const auto& f : failures_) out += (out.empty() ? "" : "; ") + ("failed: " + f);
    for (const auto& n : notes_) out += (out.empty() ? "" : "; ") + n;
    return out;
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string Num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Runs the CLI; returns its exit status.
int RunCli(const std::string& cli, const std::string& args, const fs::path& log) {
  const std::string cmd = "\"" + cli + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, double> ReadMetrics(const fs::path& csv) {
  std::map<std::string, double> out;
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string name, value;
    std::getline(row, name, ',');
    std::getline(row, value, ',');
    out[name] = std::stod(value);
  }
  return out;
}

std::vector<std::map<std::string, std::string>> ReadTable(const fs::path& csv) {
  std::ifstream in(csv);
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::istringstream row(line);
    for (std::string c; std::getline(row, c, ',');) cells.push_back(c);
    return cells;
  };
  std::string line;
  std::getline(in, line);
  const auto header = split(line);
  std::vector<std::map<std::string, std::string>> rows;
  while (std::getline(in, line)) {
    const auto cells = split(line);
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < header.size() && i < cells.size(); ++i) row[header[i]] = cells[i];
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::uint8_t> ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

UnitSphereCloud RandomCloud(int anchors, double fill, std::mt19937_64& rng) {
  UnitSphereCloud c(anchors);
  std::bernoulli_distribution on(fill);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_real_distribution<float> dist(0.0f, 60000.0f);
  for (int a = 0; a < anchors; ++a) {
    if (on(rng)) {
      c.Set(static_cast<AnchorIndex>(a),
            {byte(rng) / 255.0f, byte(rng) / 255.0f, byte(rng) / 255.0f}, dist(rng));
    }
  }
  return c;
}

// 1. Grid lookup mismatch.
void MismatchCriterion(const std::string& cli, const fs::path& work, Checker& c) {
  const auto run = [&](const std::string& grid, double* seconds) {
    const fs::path report = work / ("mismatch_" + grid + ".csv");
    const auto start = Clock::now();
    const int rc = RunCli(cli,
                          "eval-mismatch --anchors 1280 --grid " + grid +
                              " --points 1000000 --cube 10 --report \"" + report.string() + "\"",
                          work / "mismatch.log");
    *seconds = Seconds(start);
    c.Expect(rc == 0, "eval-mismatch " + grid + " exit code " + std::to_string(rc));
    return rc == 0 ? ReadMetrics(report).at("mismatch_rate") : 1.0;
  };
  double t1 = 0, t2 = 0;
  const double base = run("1024x512", &t1);
  const double doubled = run("2048x1024", &t2);
  c.Expect(base <= 0.035, "mismatch " + Num(base) + " > 0.035");
  c.Expect(doubled <= base + 0.002, "doubled grid raised mismatch to " + Num(doubled));
  c.Expect(t1 <= 60.0, "runtime " + Num(t1, 1) + " s > 60 s");
  c.Note("mismatch " + Num(base) + " (" + Num(t1, 1) + " s), doubled grid " + Num(doubled));
}

// 2. Encoding size law, golden bytes, round trip.
void EncodingCriterion(Checker& c) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> anchors(1, 4096);
  std::uniform_real_distribution<double> fill(0.0, 1.0);
  int size_failures = 0, round_trip_failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const UnitSphereCloud cloud = RandomCloud(anchors(rng), fill(rng), rng);
    const Bytes packet = Encode(cloud);
    if (packet.size() != 10 + 7 * static_cast<std::size_t>(cloud.initialized_count())) {
      ++size_failures;
    }
    // Colors are multiples of 1/255; snap distances to binary16 first.
    UnitSphereCloud fixed(cloud.anchor_count());
    for (int a = 0; a < cloud.anchor_count(); ++a) {
      if (!cloud[a].initialized) continue;
      fixed.Set(static_cast<AnchorIndex>(a), cloud[a].color,
                HalfBitsToFloat(FloatToHalfBits(cloud[a].distance)));
    }
    if (!(Decode(Encode(fixed)) == fixed)) ++round_trip_failures;
  }
  c.Expect(size_failures == 0, std::to_string(size_failures) + " size-law violations");
  c.Expect(round_trip_failures == 0, std::to_string(round_trip_failures) + " round-trip mismatches");

  UnitSphereCloud golden(8);
  golden.Set(0, {0.0f, 0.0f, 0.0f}, 1e-6f);
  golden.Set(1, {1.0f, 0.5f, 0.0f}, 1.5f);
  golden.Set(4, {0.2f, 0.4f, 0.6f}, 0.1f);
  golden.Set(5, {0.999f, 0.001f, 0.502f}, 3.14159f);
  golden.Set(6, {0.25f, 0.75f, 0.125f}, 2049.0f);
  golden.Set(7, {0.00196f, 0.998f, 0.5f}, 65504.0f);
  const auto expected = ReadFile(fs::path(EDGELIGHT_TEST_DATA_DIR) / "golden_packet.bin");
  c.Expect(!expected.empty() && Encode(golden) == expected, "golden packet bytes differ");
  c.Note("1000 clouds, golden " + std::to_string(expected.size()) + " bytes");
}

std::vector<Vec3> Directions(const PointCloud& cloud) { return PointDirections(cloud); }

// 3. Completeness entropy.
void EntropyCriterion(Checker& c) {
  const std::vector<Vec3> single(1000, Normalized(Vec3{0.3, -0.4, 0.5}));
  const double h1 = CompletenessEntropy(single);
  c.Expect(std::abs(h1 - std::log2(12.0)) <= 1e-9, "single direction entropy " + Num(h1, 12));
  const double hu = CompletenessEntropy(UniformSphereDirections(1000000, 3));
  c.Expect(std::abs(hu - 10.085) <= 0.05, "uniform entropy " + Num(hu));

  const AnchorSet anchors = GenerateAnchors(kDefaultAnchorCount);
  const AccelerationGrid grid = BuildGrid(anchors);
  int wins = 0;
  double mean[3] = {0, 0, 0};
  constexpr int kScenes = 100;
  for (int seed = 1; seed <= kScenes; ++seed) {
    const SyntheticScene scene = RandomScene(static_cast<std::uint64_t>(seed));
    const FrameInput f = RenderFrame(scene, 0);
    const PointCloud local =
        TranslateTo(Backproject(f.rgb, f.depth, scene.intrinsics, f.pose),
                    scene.estimation_positions[0]);
    const std::vector<Vec3> raw = Directions(local);
    const std::vector<Vec3> uspc =
        InitializedDirections(SphereSample(local, anchors, grid), anchors);
    const double e_uspc = RelativeEntropy(uspc, raw);
    const double e_random = RelativeEntropy(
        Directions(UniformRandomDownsample(local, uspc.size(), seed)), raw);
    const double e_fps =
        RelativeEntropy(Directions(FarthestPointDownsample(local, uspc.size())), raw);
    if (e_uspc >= e_random && e_uspc >= e_fps) ++wins;
    mean[0] += e_uspc / kScenes;
    mean[1] += e_random / kScenes;
    mean[2] += e_fps / kScenes;
  }
  c.Expect(wins >= 95, "sphere sampling best on only " + std::to_string(wins) + "/100 scenes");
  c.Note("H(single) " + Num(h1, 9) + ", H(uniform) " + Num(hu) + ", best on " +
         std::to_string(wins) + "/100, mean relative entropy sphere " + Num(mean[0]) +
         " random " + Num(mean[1]) + " fps " + Num(mean[2]));
}

// 4. SH projection.
void ProjectorCriterion(Checker& c) {
  const AnchorSet anchors = GenerateAnchors(kDefaultAnchorCount);
  UnitSphereCloud white(anchors.count());
  for (int a = 0; a < anchors.count(); ++a) white.Set(static_cast<AnchorIndex>(a), {1, 1, 1}, 1);
  const ShCoefficients w = ProjectSh(white, anchors);
  double worst_high = 0;
  for (int ch = 0; ch < 3; ++ch) {
    c.Expect(std::abs(w.at(ch, 0) - 3.5449) <= 0.02, "c00 " + Num(w.at(ch, 0)));
    for (int k = 1; k < kShBasisCount; ++k) worst_high = std::max(worst_high, std::abs(w.at(ch, k)));
  }
  c.Expect(worst_high <= 0.02, "higher band " + Num(worst_high));

  // Clamped cosine about a tilted axis, each channel scaled differently.
  const Vec3 axis = Normalized(Vec3{0.2, 0.9, -0.4});
  const double scale[3] = {1.0, 0.6, 0.3};
  auto radiance = [&](const Vec3& d, int ch) { return scale[ch] * std::max(0.0, Dot(d, axis)); };
  UnitSphereCloud lobe(anchors.count());
  for (int a = 0; a < anchors.count(); ++a) {
    const Vec3 d = anchors.direction(static_cast<AnchorIndex>(a));
    lobe.Set(static_cast<AnchorIndex>(a),
             {static_cast<float>(radiance(d, 0)), static_cast<float>(radiance(d, 1)),
              static_cast<float>(radiance(d, 2))},
             1);
  }
  ShCoefficients brute;
  constexpr int kN = 1000000;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < kN; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / kN;
    const double r = std::sqrt(1.0 - z * z);
    const Vec3 d{r * std::cos(golden * i), r * std::sin(golden * i), z};
    const auto y = ShBasis(d);
    for (int ch = 0; ch < 3; ++ch) {
      const double f = radiance(d, ch);
      for (int k = 0; k < kShBasisCount; ++k) brute.at(ch, k) += f * y[k];
    }
  }
  for (double& v : brute.values) v *= 4.0 * std::numbers::pi / kN;
  const double lobe_rmse = ShRmse(ProjectSh(lobe, anchors), brute);
  c.Expect(lobe_rmse <= 1e-2, "clamped cosine RMSE " + Num(lobe_rmse, 6));

  // Additivity and color scaling on full clouds; distance scaling changes nothing.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<float> half(0.0f, 0.5f);
  std::uniform_real_distribution<float> dist(0.1f, 20.0f);
  double worst_linear = 0;
  for (int trial = 0; trial < 20; ++trial) {
    UnitSphereCloud a(anchors.count()), b(anchors.count()), sum(anchors.count()),
        scaled(anchors.count()), far(anchors.count());
    for (int i = 0; i < anchors.count(); ++i) {
      const auto idx = static_cast<AnchorIndex>(i);
      const Rgb ca{half(rng), half(rng), half(rng)};
      const Rgb cb{half(rng), half(rng), half(rng)};
      const float d = dist(rng);
      a.Set(idx, ca, d);
      b.Set(idx, cb, 1);
      sum.Set(idx, {ca.r + cb.r, ca.g + cb.g, ca.b + cb.b}, 1);
      scaled.Set(idx, {ca.r * 0.25f, ca.g * 0.25f, ca.b * 0.25f}, d);
      far.Set(idx, ca, d * 3.5f);
    }
    const ShCoefficients pa = ProjectSh(a, anchors);
    const ShCoefficients pb = ProjectSh(b, anchors);
    const ShCoefficients ps = ProjectSh(sum, anchors);
    const ShCoefficients pk = ProjectSh(scaled, anchors);
    const ShCoefficients pf = ProjectSh(far, anchors);
    for (int i = 0; i < kShValueCount; ++i) {
      worst_linear = std::max(worst_linear, std::abs(ps.values[i] - pa.values[i] - pb.values[i]));
      worst_linear = std::max(worst_linear, std::abs(pk.values[i] - 0.25 * pa.values[i]));
      worst_linear = std::max(worst_linear, std::abs(pf.values[i] - pa.values[i]));
    }
  }
  c.Expect(worst_linear <= 1e-6, "linearity error " + Num(worst_linear, 9));
  c.Note("c00 " + Num(w.at(0, 0)) + ", lobe RMSE " + Num(lobe_rmse, 6) + ", linearity " +
         Num(worst_linear, 9));
}

// 5. Trigger rules.
void TriggerCriterion(Checker& c) {
  const AnchorSet anchors = GenerateAnchors(kDefaultAnchorCount);
  std::mt19937_64 rng(5);
  TriggerConfig config;  // theta 0.6, window 4
  int identical_fired = 0;
  for (int i = 0; i < 100; ++i) {
    const UnitSphereCloud a = RandomCloud(anchors.count(), 0.5, rng);
    identical_fired += ShouldTrigger(a, a, anchors, config).fire;
  }
  c.Expect(identical_fired == 0, "identical clouds fired " + std::to_string(identical_fired));

  UnitSphereCloud black(anchors.count()), white(anchors.count());
  for (int a = 0; a < anchors.count(); ++a) {
    black.Set(static_cast<AnchorIndex>(a), {0, 0, 0}, 1);
    white.Set(static_cast<AnchorIndex>(a), {1, 1, 1}, 1);
  }
  for (double theta : {0.1, 0.5, 0.99}) {
    TriggerConfig t{theta, 4};
    c.Expect(ShouldTrigger(white, black, anchors, t).fire, "global change at " + Num(theta, 2));
  }
  UnitSphereCloud one = black;
  one.Set(100, {1, 1, 1}, 1);
  c.Expect(!ShouldTrigger(one, black, anchors, {0.6, 4}).fire, "single anchor fired at N=4");
  c.Expect(ShouldTrigger(one, black, anchors, {0.6, 1}).fire, "single anchor silent at N=1");

  int violations = 0;
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::uniform_int_distribution<int> window(1, 16);
  for (int i = 0; i < 1000; ++i) {
    const UnitSphereCloud a = RandomCloud(anchors.count(), u(rng), rng);
    const UnitSphereCloud b = RandomCloud(anchors.count(), u(rng), rng);
    double t1 = u(rng), t2 = u(rng);
    if (t1 > t2) std::swap(t1, t2);
    const int n = window(rng);
    if (!ShouldTrigger(a, b, anchors, {t1, n}).fire && ShouldTrigger(a, b, anchors, {t2, n}).fire) {
      ++violations;
    }
  }
  c.Expect(violations == 0, std::to_string(violations) + " monotonicity violations");
  c.Note("1000 random pairs checked");
}

// 6. End-to-end replay.
void ReplayCriterion(const std::string& cli, const fs::path& work, Checker& c) {
  const fs::path r1 = work / "r1";
  const fs::path still = work / "static";
  c.Expect(RunCli(cli, "record-synthetic --scenario r1 --frames 300 --out \"" + r1.string() + "\"",
                  work / "record.log") == 0,
           "record r1");
  c.Expect(RunCli(cli,
                  "record-synthetic --scenario static --frames 300 --out \"" + still.string() +
                      "\"",
                  work / "record.log") == 0,
           "record static");
  const fs::path r1_csv = work / "r1.csv";
  const fs::path static_csv = work / "static.csv";
  c.Expect(RunCli(cli,
                  "replay --recording \"" + r1.string() +
                      "\" --in-process --theta 0.6 --window 4 --report \"" + r1_csv.string() +
                      "\"",
                  work / "replay.log") == 0,
           "replay r1");
  c.Expect(RunCli(cli,
                  "replay --recording \"" + still.string() +
                      "\" --in-process --theta 0.6 --window 4 --report \"" +
                      static_csv.string() + "\"",
                  work / "replay.log") == 0,
           "replay static");
  const auto r1_rows = ReadTable(r1_csv);
  const auto static_rows = ReadTable(static_csv);
  c.Expect(!r1_rows.empty() && !static_rows.empty(), "replay reports present");
  if (!c.ok()) return;
  for (const auto& row : r1_rows) {
    const double triggered = std::stod(row.at("triggered_pct"));
    const double rmse = std::stod(row.at("rmse_baseline_mean"));
    c.Expect(triggered <= 5.0, "r1 triggered " + Num(triggered, 2) + "%");
    c.Expect(rmse <= 0.05, "r1 RMSE vs every-frame " + Num(rmse));
    c.Note("r1 " + row.at("position_id") + " triggered " + Num(triggered, 2) + "%, RMSE " +
           Num(rmse));
  }
  for (const auto& row : static_rows) {
    c.Expect(row.at("triggered") == "1", "static " + row.at("position_id") + " triggered " +
                                             row.at("triggered") + " times");
  }
  c.Note("static positions " + std::to_string(static_rows.size()) + " triggered once each");
}

// 7. Service over loopback.
void ServiceCriterion(Checker& c) {
  EdgeService service;
  HttpEdgeServer server(service);
  const int port = server.Start("127.0.0.1", 0);
  const std::string url = "http://127.0.0.1:" + std::to_string(port);
  HttpEndpoint endpoint(url);
  const AnchorSet anchors = GenerateAnchors(kDefaultAnchorCount);

  const std::string session = endpoint.CreateSession(kDefaultAnchorCount);
  const SessionDescriptor joined = endpoint.JoinSession(session);
  c.Expect(joined.anchor_count == kDefaultAnchorCount, "join reports the anchor count");

  constexpr int kClients = 8;
  std::vector<std::string> positions;
  for (int i = 0; i < kClients; ++i) {
    positions.push_back(endpoint.RegisterPosition(session, {0.1 * i, 0, 0}));
  }
  std::atomic<int> regressions{0}, bad_sizes{0}, failures{0}, successes{0};
  std::atomic<bool> stop{false};
  std::thread watcher([&] {
    std::vector<int> last(kClients, 0);
    while (!stop) {
      for (int i = 0; i < kClients; ++i) {
        const int n = service.Position(session, positions[i]).accumulated.initialized_count();
        if (n < last[i]) ++regressions;
        last[i] = n;
      }
    }
  });
  std::vector<std::thread> clients;
  for (int i = 0; i < kClients; ++i) {
    clients.emplace_back([&, i] {
      httplib::Client client("127.0.0.1", port);
      std::mt19937_64 rng(70 + i);
      const std::string path =
          "/sessions/" + session + "/positions/" + positions[i] + "/estimate";
      int last = 0;
      for (int round = 0; round < 25; ++round) {
        const Bytes packet = Encode(RandomCloud(kDefaultAnchorCount, 0.05, rng));
        auto r = client.Post(path, reinterpret_cast<const char*>(packet.data()), packet.size(),
                             "application/octet-stream");
        if (!r || r->status != 200) {
          ++failures;
          continue;
        }
        ++successes;
        if (r->body.size() != kShPayloadSize) ++bad_sizes;
        const int n = service.Position(session, positions[i]).accumulated.initialized_count();
        if (n < last) ++regressions;
        last = n;
      }
    });
  }
  for (auto& t : clients) t.join();
  stop = true;
  watcher.join();
  c.Expect(failures == 0, std::to_string(failures.load()) + " failed requests");
  c.Expect(regressions == 0, std::to_string(regressions.load()) + " count regressions");
  c.Expect(bad_sizes == 0, std::to_string(bad_sizes.load()) + " responses not 108 bytes");

  // Malformed packets leave the state alone.
  const PositionSnapshot before = service.Position(session, positions[0]);
  std::mt19937_64 rng(77);
  const Bytes good = Encode(RandomCloud(kDefaultAnchorCount, 0.3, rng));
  std::vector<Bytes> bad;
  {
    Bytes b = good;
    b[0] = 'Y';
    bad.push_back(b);
    b = good;
    b[4] = 9;
    bad.push_back(b);
    b = good;
    b.pop_back();
    bad.push_back(b);
    b = good;
    b.push_back(1);
    bad.push_back(b);
    b = good;
    b[10] = 0xff;
    b[11] = 0xff;
    bad.push_back(b);
    bad.push_back(Bytes{});
  }
  httplib::Client client("127.0.0.1", port);
  int accepted = 0;
  for (const Bytes& b : bad) {
    auto r = client.Post("/sessions/" + session + "/positions/" + positions[0] + "/estimate",
                         reinterpret_cast<const char*>(b.data()), b.size(),
                         "application/octet-stream");
    if (!r || r->status != 400) ++accepted;
  }
  const PositionSnapshot after = service.Position(session, positions[0]);
  c.Expect(accepted == 0, std::to_string(accepted) + " malformed packets not rejected with 400");
  c.Expect(after.accumulated == before.accumulated && after.last_estimate == before.last_estimate,
           "malformed packets mutated state");
  server.Stop();
  c.Note(std::to_string(successes.load()) + " concurrent estimates, " +
         std::to_string(bad.size()) + " malformed packets rejected");
}

// 8. Client frame latency.
void LatencyCriterion(const std::string& cli, const fs::path& work, Checker& c) {
  const fs::path rec = work / "r1";
  if (!fs::exists(rec / "manifest.json")) {
    RunCli(cli, "record-synthetic --scenario r1 --frames 300 --out \"" + rec.string() + "\"",
           work / "record.log");
  }
  const fs::path report = work / "bench.csv";
  const int rc = RunCli(cli,
                        "bench-pipeline --recording \"" + rec.string() + "\" --report \"" +
                            report.string() + "\"",
                        work / "bench.log");
  c.Expect(rc == 0, "bench-pipeline exit code " + std::to_string(rc));
  if (rc != 0) return;
  const auto m = ReadMetrics(report);
  const double p95 = m.at("client_frame_p95");
  c.Expect(p95 <= 33.0, "client frame p95 " + Num(p95, 2) + " ms");
  c.Note("256x192 frames, p50 " + Num(m.at("client_frame_p50"), 2) + " ms, p95 " + Num(p95, 2) +
         " ms");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path-to-edgelight-cli>\n";
    return 2;
  }
  const std::string cli = argv[1];
  std::string tmpl = (fs::temp_directory_path() / "edgelight_acceptance_XXXXXX").string();
  if (mkdtemp(tmpl.data()) == nullptr) {
    std::cerr << "cannot create a work directory\n";
    return 1;
  }
  const fs::path work = tmpl;

  const std::vector<std::pair<std::string, std::function<void(Checker&)>>> criteria = {
      {"grid mismatch rate", [&](Checker& c) { MismatchCriterion(cli, work, c); }},
      {"packet encoding", EncodingCriterion},
      {"completeness entropy", EntropyCriterion},
      {"SH projection", ProjectorCriterion},
      {"trigger rules", TriggerCriterion},
      {"end-to-end replay", [&](Checker& c) { ReplayCriterion(cli, work, c); }},
      {"service conformance", ServiceCriterion},
      {"client frame latency", [&](Checker& c) { LatencyCriterion(cli, work, c); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Checker checker;
    const auto start = Clock::now();
    try {
      criteria[i].second(checker);
    } catch (const std::exception& e) {
      checker.Expect(false, std::string("exception: ") + e.what());
    }
    const bool ok = checker.ok();
    failed += !ok;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first
              << "): " << checker.Detail() << " [" << Num(Seconds(start), 1) << " s]"
              << std::endl;
  }
  fs::remove_all(work);
  return failed == 0 ? 0 : 1;
}
