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

#include "edgelight/edge_service.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "edgelight/codec.h"
#include "edgelight/errors.h"

namespace edgelight {
namespace {

std::string RandomToken() {
  std::random_device device;
  static constexpr char kHex[] = "0123456789abcdef";
  std::string token;
  token.reserve(32);
  for (int i = 0; i < 4; ++i) {
    std::uint32_t word = device();
    for (int k = 0; k < 8; ++k) {
      token.push_back(kHex[word & 0xfu]);
      word >>= 4;
    }
  }
  return token;
}

std::string ToHex(std::span<const std::uint8_t> bytes) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0xfu]);
  }
  return out;
}

Bytes FromHex(const std::string& hex) {
  if (hex.size() % 2 != 0) throw InvalidArgument("odd-length hex string");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto [ptr, ec] =
        std::from_chars(hex.data() + 2 * i, hex.data() + 2 * i + 2, out[i], 16);
    if (ec != std::errc() || ptr != hex.data() + 2 * i + 2) {
      throw InvalidArgument("bad hex string");
    }
  }
  return out;
}

}  // namespace

void FifoMutex::lock() {
  std::unique_lock lock(mutex_);
  const std::uint64_t ticket = next_ticket_++;
  cv_.wait(lock, [&] { return serving_ == ticket; });
}

void FifoMutex::unlock() {
  {
    std::lock_guard lock(mutex_);
    ++serving_;
  }
  cv_.notify_all();
}

struct EdgeService::PositionSlot {
  Vec3 world_position;
  mutable FifoMutex mutex;
  UnitSphereCloud accumulated;
  std::optional<ShCoefficients> last_estimate;
  std::int64_t updated_at_ms = 0;
};

struct EdgeService::Session {
  std::string id;
  int anchor_count = 0;
  std::int64_t created_at_ms = 0;
  mutable std::shared_mutex mutex;
  std::map<std::string, std::shared_ptr<PositionSlot>> positions;
  std::vector<std::string> order;
  int next_position = 0;
};

std::int64_t NowMillis() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

bool AnchorCountPolicy::Allows(int anchor_count) const {
  if (!whitelist.empty()) {
    return std::find(whitelist.begin(), whitelist.end(), anchor_count) !=
           whitelist.end();
  }
  return anchor_count >= min_count && anchor_count <= max_count;
}

AnchorCountPolicy AnchorCountPolicy::Parse(const std::string& text) {
  auto parse_int = [](std::string_view s) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || value < 2) {
      throw InvalidArgument("bad anchor count '" + std::string(s) + "'");
    }
    return value;
  };
  AnchorCountPolicy policy;
  const auto dash = text.find('-');
  if (dash != std::string::npos) {
    policy.min_count = parse_int(std::string_view(text).substr(0, dash));
    policy.max_count = parse_int(std::string_view(text).substr(dash + 1));
    if (policy.min_count > policy.max_count) {
      throw InvalidArgument("empty anchor count range");
    }
    return policy;
  }
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) policy.whitelist.push_back(parse_int(item));
  if (policy.whitelist.empty()) throw InvalidArgument("empty anchor whitelist");
  return policy;
}

EdgeService::EdgeService(EdgeServiceOptions options) : options_(std::move(options)) {
  if (!options_.estimator) throw InvalidArgument("estimator is required");
}

EdgeService::~EdgeService() = default;

const AnchorSet& EdgeService::Anchors(int anchor_count) const {
  std::lock_guard lock(anchors_mutex_);
  auto& slot = anchors_[anchor_count];
  if (!slot) {
    slot = std::make_shared<const AnchorSet>(GenerateAnchors(anchor_count, 0));
  }
  return *slot;
}

std::string EdgeService::CreateSession(int anchor_count) {
  if (!options_.anchor_counts.Allows(anchor_count)) {
    throw InvalidArgument("unsupported anchor count " +
                          std::to_string(anchor_count));
  }
  Anchors(anchor_count);
  auto session = std::make_shared<Session>();
  session->anchor_count = anchor_count;
  session->created_at_ms = NowMillis();
  std::unique_lock lock(sessions_mutex_);
  do {
    session->id = RandomToken();
  } while (sessions_.contains(session->id));
  sessions_.emplace(session->id, session);
  return session->id;
}

std::shared_ptr<EdgeService::Session> EdgeService::FindSession(
    const std::string& session_id) const {
  std::shared_lock lock(sessions_mutex_);
  const auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw NotFound("unknown session " + session_id);
  return it->second;
}

std::shared_ptr<EdgeService::PositionSlot> EdgeService::FindPosition(
    const Session& session, const std::string& position_id) const {
  std::shared_lock lock(session.mutex);
  const auto it = session.positions.find(position_id);
  if (it == session.positions.end()) {
    throw NotFound("unknown position " + position_id);
  }
  return it->second;
}

SessionDescriptor EdgeService::JoinSession(const std::string& session_id) const {
  const auto session = FindSession(session_id);
  std::shared_lock lock(session->mutex);
  return {session->id, session->anchor_count, session->created_at_ms,
          session->order};
}

std::string EdgeService::RegisterPosition(const std::string& session_id,
                                          const Vec3& world_position) {
  const auto session = FindSession(session_id);
  if (!std::isfinite(world_position.x) || !std::isfinite(world_position.y) ||
      !std::isfinite(world_position.z)) {
    throw InvalidArgument("position must be finite");
  }
  auto slot = std::make_shared<PositionSlot>();
  slot->world_position = world_position;
  slot->accumulated = UnitSphereCloud(session->anchor_count);
  slot->updated_at_ms = NowMillis();
  std::unique_lock lock(session->mutex);
  std::string id = "pos-" + std::to_string(session->next_position++);
  session->positions.emplace(id, std::move(slot));
  session->order.push_back(id);
  return id;
}

ShCoefficients EdgeService::Estimate(const std::string& session_id,
                                     const std::string& position_id,
                                     std::span<const std::uint8_t> packet,
                                     bool share_observation) {
  const auto session = FindSession(session_id);
  const auto slot = FindPosition(*session, position_id);
  const UnitSphereCloud incoming = Decode(packet);
  if (incoming.anchor_count() != session->anchor_count) {
    throw InvalidArgument("packet has " + std::to_string(incoming.anchor_count()) +
                          " anchors, session expects " +
                          std::to_string(session->anchor_count));
  }
  const AnchorSet& anchors = Anchors(session->anchor_count);

  ShCoefficients sh;
  {
    std::lock_guard lock(slot->mutex);
    UnitSphereCloud merged = Merge(slot->accumulated, incoming);
    if (merged.initialized_count() == 0) {
      throw InsufficientObservation("position has no observed anchor yet");
    }
    sh = options_.estimator->Estimate(merged, anchors);
    slot->accumulated = std::move(merged);
    slot->last_estimate = sh;
    slot->updated_at_ms = NowMillis();
  }

  if (share_observation) {
    std::vector<std::shared_ptr<PositionSlot>> twins;
    {
      std::shared_lock lock(session->mutex);
      for (const auto& [id, other] : session->positions) {
        if (other != slot && other->world_position == slot->world_position) {
          twins.push_back(other);
        }
      }
    }
    for (const auto& twin : twins) {
      std::lock_guard lock(twin->mutex);
      MergeInto(twin->accumulated, incoming);
      twin->updated_at_ms = NowMillis();
    }
  }
  return sh;
}

PositionSnapshot EdgeService::Position(const std::string& session_id,
                                       const std::string& position_id) const {
  const auto session = FindSession(session_id);
  const auto slot = FindPosition(*session, position_id);
  std::lock_guard lock(slot->mutex);
  return {slot->world_position, slot->accumulated, slot->last_estimate,
          slot->updated_at_ms};
}

std::size_t EdgeService::session_count() const {
  std::shared_lock lock(sessions_mutex_);
  return sessions_.size();
}

void EdgeService::WriteSnapshot(const std::filesystem::path& path) const {
  nlohmann::json doc;
  doc["version"] = 1;
  doc["sessions"] = nlohmann::json::array();
  std::vector<std::shared_ptr<Session>> sessions;
  {
    std::shared_lock lock(sessions_mutex_);
    for (const auto& [id, s] : sessions_) sessions.push_back(s);
  }
  std::sort(sessions.begin(), sessions.end(),
            [](const auto& a, const auto& b) { return a->id < b->id; });
  for (const auto& session : sessions) {
    nlohmann::json js;
    js["id"] = session->id;
    js["anchor_count"] = session->anchor_count;
    js["created_at_ms"] = session->created_at_ms;
    js["next_position"] = session->next_position;
    js["positions"] = nlohmann::json::array();
    std::shared_lock lock(session->mutex);
    for (const std::string& pid : session->order) {
      const auto& slot = session->positions.at(pid);
      std::lock_guard slot_lock(slot->mutex);
      nlohmann::json jp;
      jp["id"] = pid;
      jp["world_position"] = {slot->world_position.x, slot->world_position.y,
                              slot->world_position.z};
      jp["accumulated"] = ToHex(Encode(slot->accumulated));
      jp["updated_at_ms"] = slot->updated_at_ms;
      if (slot->last_estimate) {
        jp["last_estimate"] = slot->last_estimate->values;
      } else {
        jp["last_estimate"] = nullptr;
      }
      js["positions"].push_back(std::move(jp));
    }
    doc["sessions"].push_back(std::move(js));
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write snapshot " + path.string());
  out << doc.dump(1) << '\n';
}

void EdgeService::LoadSnapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read snapshot " + path.string());
  const nlohmann::json doc = nlohmann::json::parse(in);
  for (const auto& js : doc.at("sessions")) {
    auto session = std::make_shared<Session>();
    session->id = js.at("id").get<std::string>();
    session->anchor_count = js.at("anchor_count").get<int>();
    session->created_at_ms = js.at("created_at_ms").get<std::int64_t>();
    session->next_position = js.at("next_position").get<int>();
    for (const auto& jp : js.at("positions")) {
      auto slot = std::make_shared<PositionSlot>();
      const auto& wp = jp.at("world_position");
      slot->world_position = {wp.at(0).get<double>(), wp.at(1).get<double>(),
                              wp.at(2).get<double>()};
      slot->accumulated = Decode(FromHex(jp.at("accumulated").get<std::string>()));
      if (slot->accumulated.anchor_count() != session->anchor_count) {
        throw InvalidArgument("snapshot position has the wrong anchor count");
      }
      slot->updated_at_ms = jp.at("updated_at_ms").get<std::int64_t>();
      if (!jp.at("last_estimate").is_null()) {
        ShCoefficients sh;
        sh.values = jp.at("last_estimate").get<std::array<double, kShValueCount>>();
        slot->last_estimate = sh;
      }
      const std::string pid = jp.at("id").get<std::string>();
      session->positions.emplace(pid, std::move(slot));
      session->order.push_back(pid);
    }
    Anchors(session->anchor_count);
    std::unique_lock lock(sessions_mutex_);
    sessions_[session->id] = std::move(session);
  }
}

std::vector<Vec3> FanOutPositions(const Vec3& placement, const Vec3& object_extent,
                                  int count) {
  if (object_extent.x < 0.0 || object_extent.y < 0.0 || object_extent.z < 0.0) {
    throw InvalidArgument("object extent must be nonnegative");
  }
  const double hx = object_extent.x / 2.0;
  const double hz = object_extent.z / 2.0;
  switch (count) {
    case 1:
      return {placement};
    case 2:
      return {placement + Vec3{-hx, 0, 0}, placement + Vec3{hx, 0, 0}};
    case 4:
      return {placement + Vec3{-hx, 0, -hz}, placement + Vec3{hx, 0, -hz},
              placement + Vec3{-hx, 0, hz}, placement + Vec3{hx, 0, hz}};
    default:
      throw InvalidArgument("fan-out count must be 1, 2 or 4");
  }
}

}  // namespace edgelight
