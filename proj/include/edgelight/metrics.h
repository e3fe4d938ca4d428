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

#ifndef EDGELIGHT_METRICS_H_
#define EDGELIGHT_METRICS_H_

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "edgelight/sphere_geometry.h"
#include "edgelight/vec3.h"

namespace edgelight {

// Fraction of directions whose grid lookup differs from the exact nearest
// anchor.
double MismatchRate(const AnchorSet& anchors, const AccelerationGrid& grid,
                    std::span<const Vec3> directions);

// Directions from the cube center to `count` points drawn uniformly in a
// cube of edge `edge_meters`. Points that land exactly on the center are
// redrawn.
std::vector<Vec3> CubeDirections(std::size_t count, double edge_meters,
                                 std::uint64_t seed);

std::vector<Vec3> UniformSphereDirections(std::size_t count, std::uint64_t seed);

// CompletenessEntropy(sampled) / CompletenessEntropy(raw).
double RelativeEntropy(std::span<const Vec3> sampled, std::span<const Vec3> raw);

struct EncodingStats {
  std::size_t requests = 0;
  std::size_t total_bytes = 0;
  std::size_t raw_frame_bytes = 0;  // 5 bytes per RGB-D pixel
  double mean_bytes() const {
    return requests == 0 ? 0.0 : static_cast<double>(total_bytes) / requests;
  }
  // 1 - mean packet size / raw frame size.
  double reduction() const;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
  std::size_t count = 0;
};

// Population standard deviation.
MeanStd ComputeMeanStd(std::span<const double> values);

// Nearest-rank percentile, p in [0, 100]. Empty input gives 0.
double Percentile(std::vector<double> values, double p);

// Spearman rank correlation with average ranks for ties.
double SpearmanRho(std::span<const double> a, std::span<const double> b);

struct TimingSummary {
  std::string stage;
  double p50_ms = 0.0;
  double p95_ms = 0.0;
  std::size_t samples = 0;
};

TimingSummary SummarizeTimings(const std::string& stage,
                               std::vector<double> samples_ms);

// Named scalar results with units, written as name,value,unit CSV rows.
class EvalReport {
 public:
  struct Entry {
    std::string name;
    double value = 0.0;
    std::string unit;
  };

  void Add(std::string name, double value, std::string unit);
  void AddTiming(const TimingSummary& t);
  const std::vector<Entry>& entries() const { return entries_; }
  // Throws std::out_of_range when the name is missing.
  double Get(const std::string& name) const;
  void WriteCsv(std::ostream& out) const;

 private:
  std::vector<Entry> entries_;
};

}  // namespace edgelight

#endif  // EDGELIGHT_METRICS_H_
