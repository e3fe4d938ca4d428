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

#include "edgelight/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "edgelight/errors.h"
#include "edgelight/sampling.h"

namespace edgelight {
namespace {

std::vector<double> Ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double MismatchRate(const AnchorSet& anchors, const AccelerationGrid& grid,
                    std::span<const Vec3> directions) {
  if (directions.empty()) throw InvalidArgument("no directions to evaluate");
  if (grid.anchor_count() != anchors.count()) {
    throw InvalidArgument("grid was built over a different anchor set");
  }
  const ExactAnchorIndex exact(anchors);
  std::size_t mismatches = 0;
  for (const Vec3& d : directions) {
    if (grid.Lookup(d) != exact.Nearest(d)) ++mismatches;
  }
  return static_cast<double>(mismatches) / static_cast<double>(directions.size());
}

std::vector<Vec3> CubeDirections(std::size_t count, double edge_meters,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-edge_meters / 2.0, edge_meters / 2.0);
  std::vector<Vec3> out;
  out.reserve(count);
  while (out.size() < count) {
    const Vec3 p{coord(rng), coord(rng), coord(rng)};
    const double n = Norm(p);
    if (n > 0.0) out.push_back(p * (1.0 / n));
  }
  return out;
}

std::vector<Vec3> UniformSphereDirections(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<Vec3> out;
  out.reserve(count);
  while (out.size() < count) {
    const Vec3 p{gauss(rng), gauss(rng), gauss(rng)};
    const double n = Norm(p);
    if (n > 1e-12) out.push_back(p * (1.0 / n));
  }
  return out;
}

double RelativeEntropy(std::span<const Vec3> sampled, std::span<const Vec3> raw) {
  if (sampled.empty() || raw.empty()) {
    throw InvalidArgument("relative entropy needs nonempty inputs");
  }
  return CompletenessEntropy(sampled) / CompletenessEntropy(raw);
}

double EncodingStats::reduction() const {
  if (raw_frame_bytes == 0) return 0.0;
  return 1.0 - mean_bytes() / static_cast<double>(raw_frame_bytes);
}

MeanStd ComputeMeanStd(std::span<const double> values) {
  MeanStd out;
  out.count = values.size();
  if (values.empty()) return out;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  double sq = 0.0;
  for (double v : values) sq += (v - out.mean) * (v - out.mean);
  out.std = std::sqrt(sq / values.size());
  return out;
}

double Percentile(std::vector<double> values, double p) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double rank = std::ceil(std::clamp(p, 0.0, 100.0) / 100.0 * values.size());
  const std::size_t index =
      rank < 1.0 ? 0 : std::min(values.size() - 1, static_cast<std::size_t>(rank) - 1);
  return values[index];
}

double SpearmanRho(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw InvalidArgument("Spearman needs two equal-length samples of size >= 2");
  }
  const std::vector<double> ra = Ranks(a);
  const std::vector<double> rb = Ranks(b);
  const MeanStd ma = ComputeMeanStd(ra);
  const MeanStd mb = ComputeMeanStd(rb);
  if (ma.std == 0.0 || mb.std == 0.0) return 0.0;
  double cov = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - ma.mean) * (rb[i] - mb.mean);
  }
  cov /= ra.size();
  return cov / (ma.std * mb.std);
}

TimingSummary SummarizeTimings(const std::string& stage,
                               std::vector<double> samples_ms) {
  for (double v : samples_ms) {
    if (!(v >= 0.0)) throw InvalidArgument("timing samples must be nonnegative");
  }
  TimingSummary t;
  t.stage = stage;
  t.samples = samples_ms.size();
  t.p50_ms = Percentile(samples_ms, 50.0);
  t.p95_ms = Percentile(std::move(samples_ms), 95.0);
  return t;
}

void EvalReport::Add(std::string name, double value, std::string unit) {
  if (!std::isfinite(value)) throw InvalidArgument(name + " is not finite");
  if (unit == "fraction" && (value < 0.0 || value > 1.0)) {
    throw InvalidArgument(name + " is a fraction outside [0, 1]");
  }
  if (unit == "ms" && value < 0.0) throw InvalidArgument(name + " is a negative time");
  entries_.push_back({std::move(name), value, std::move(unit)});
}

void EvalReport::AddTiming(const TimingSummary& t) {
  Add(t.stage + "_p50", t.p50_ms, "ms");
  Add(t.stage + "_p95", t.p95_ms, "ms");
}

double EvalReport::Get(const std::string& name) const {
  for (const Entry& e : entries_) {
    if (e.name == name) return e.value;
  }
  throw InvalidArgument("no metric named " + name);
}

void EvalReport::WriteCsv(std::ostream& out) const {
  out << "metric,value,unit\n";
  char buf[64];
  for (const Entry& e : entries_) {
    std::snprintf(buf, sizeof(buf), "%.6f", e.value);
    out << e.name << ',' << buf << ',' << e.unit << '\n';
  }
}

}  // namespace edgelight
