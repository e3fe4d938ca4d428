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

#ifndef EDGELIGHT_EDGE_SERVICE_H_
#define EDGELIGHT_EDGE_SERVICE_H_

#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "edgelight/estimator.h"
#include "edgelight/sampling.h"
#include "edgelight/sphere_geometry.h"
#include "edgelight/vec3.h"

namespace edgelight {

// Mutex that grants ownership in request order.
class FifoMutex {
 public:
  void lock();
  void unlock();

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::uint64_t next_ticket_ = 0;
  std::uint64_t serving_ = 0;
};

struct SessionDescriptor {
  std::string session_id;
  int anchor_count = 0;
  std::int64_t created_at_ms = 0;
  std::vector<std::string> position_ids;  // registration order

  friend bool operator==(const SessionDescriptor&,
                         const SessionDescriptor&) = default;
};

struct PositionSnapshot {
  Vec3 world_position;
  UnitSphereCloud accumulated;
  std::optional<ShCoefficients> last_estimate;
  std::int64_t updated_at_ms = 0;
};

// Which anchor counts a service accepts. Either a closed range or an explicit
// list.
struct AnchorCountPolicy {
  int min_count = 512;
  int max_count = 4096;
  std::vector<int> whitelist;  // when nonempty, overrides the range

  bool Allows(int anchor_count) const;
  // Parses "512-4096" or "1280,2048".
  static AnchorCountPolicy Parse(const std::string& text);
};

struct EdgeServiceOptions {
  AnchorCountPolicy anchor_counts;
  std::shared_ptr<const Estimator> estimator = std::make_shared<AnalyticShProjector>();
};

// In-memory edge state: sessions, their estimation positions and the
// per-position accumulated observation. Thread-safe. Requests against one
// position are serialized in arrival order; distinct positions run in
// parallel and the estimator runs without the session lock held.
class EdgeService {
 public:
  explicit EdgeService(EdgeServiceOptions options = {});
  ~EdgeService();

  EdgeService(const EdgeService&) = delete;
  EdgeService& operator=(const EdgeService&) = delete;

  // Throws InvalidArgument for counts the policy rejects.
  std::string CreateSession(int anchor_count);
  // Throws NotFound.
  SessionDescriptor JoinSession(const std::string& session_id) const;
  std::string RegisterPosition(const std::string& session_id,
                               const Vec3& world_position);

  // Decodes the packet, merges it into the position's accumulated cloud
  // (incoming wins), estimates from the merged cloud and stores the result.
  // On any error nothing is mutated. With share_observation the packet is
  // also merged into every other position of the session registered at the
  // same world coordinates.
  ShCoefficients Estimate(const std::string& session_id,
                          const std::string& position_id,
                          std::span<const std::uint8_t> packet,
                          bool share_observation = false);

  PositionSnapshot Position(const std::string& session_id,
                            const std::string& position_id) const;

  std::size_t session_count() const;

  void WriteSnapshot(const std::filesystem::path& path) const;
  // Adds the sessions stored in `path`; existing ids are replaced.
  void LoadSnapshot(const std::filesystem::path& path);

  const AnchorSet& Anchors(int anchor_count) const;

 private:
  struct PositionSlot;
  struct Session;

  std::shared_ptr<Session> FindSession(const std::string& session_id) const;
  std::shared_ptr<PositionSlot> FindPosition(const Session& session,
                                             const std::string& position_id) const;

  EdgeServiceOptions options_;

  mutable std::shared_mutex sessions_mutex_;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;

  mutable std::mutex anchors_mutex_;
  mutable std::map<int, std::shared_ptr<const AnchorSet>> anchors_;
};

// Returns `count` world positions: the placement itself, the two ends of the
// x half-extent, or the four horizontal half-extent corners.
std::vector<Vec3> FanOutPositions(const Vec3& placement, const Vec3& object_extent,
                                  int count);

std::int64_t NowMillis();

}  // namespace edgelight

#endif  // EDGELIGHT_EDGE_SERVICE_H_
