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

#include <random>
#include <string>

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include "edgelight/codec.h"
#include "edgelight/http_service.h"
#include "oracles.h"

namespace edgelight {
namespace {

using nlohmann::json;

class ServerFixture {
 public:
  ServerFixture() : server_(service_) {
    port_ = server_.Start("127.0.0.1", 0);
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }
  ~ServerFixture() { server_.Stop(); }

  std::string Url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  std::string NewSession(int anchors = 1280) {
    auto r = client_->Post("/sessions", json{{"anchor_count", anchors}}.dump(),
                           "application/json");
    REQUIRE(r);
    REQUIRE(r->status == 201);
    return json::parse(r->body).at("session_id").get<std::string>();
  }

  std::string NewPosition(const std::string& session) {
    auto r = client_->Post("/sessions/" + session + "/positions",
                           json{{"x", 0.5}, {"y", 1.0}, {"z", -2.0}}.dump(),
                           "application/json");
    REQUIRE(r);
    REQUIRE(r->status == 201);
    return json::parse(r->body).at("position_id").get<std::string>();
  }

  httplib::Result PostPacket(const std::string& session, const std::string& position,
                             const Bytes& packet,
                             const std::string& type = "application/octet-stream") {
    return client_->Post("/sessions/" + session + "/positions/" + position + "/estimate",
                         reinterpret_cast<const char*>(packet.data()), packet.size(),
                         type);
  }

 protected:
  EdgeService service_;
  HttpEdgeServer server_;
  int port_ = 0;
  std::unique_ptr<httplib::Client> client_;
};

UnitSphereCloud SomeCloud(std::uint64_t seed, double fill = 0.2) {
  std::mt19937_64 rng(seed);
  return testing::RandomCloud(1280, fill, rng);
}

json ErrorBody(const httplib::Result& r) {
  CHECK(r->get_header_value("Content-Type").rfind("application/json", 0) == 0);
  const json body = json::parse(r->body);
  CHECK(body.contains("error"));
  CHECK(body.contains("kind"));
  CHECK(body.contains("message"));
  return body;
}

TEST_CASE_FIXTURE(ServerFixture, "session lifecycle over http") {
  const std::string s = NewSession();
  const std::string p = NewPosition(s);
  auto r = client_->Get("/sessions/" + s);
  REQUIRE(r);
  CHECK(r->status == 200);
  const json d = json::parse(r->body);
  CHECK(d.at("session_id") == s);
  CHECK(d.at("anchor_count") == 1280);
  CHECK(d.at("positions") == json::array({p}));
  CHECK(service_.Position(s, p).world_position == Vec3{0.5, 1.0, -2.0});
}

TEST_CASE_FIXTURE(ServerFixture, "estimate returns the 108-byte coefficient payload") {
  const std::string s = NewSession();
  const std::string p = NewPosition(s);
  const Bytes packet = Encode(SomeCloud(1));
  auto r = PostPacket(s, p, packet);
  REQUIRE(r);
  CHECK(r->status == 200);
  CHECK(r->get_header_value("Content-Type") == "application/octet-stream");
  REQUIRE(r->body.size() == kShPayloadSize);
  const ShCoefficients got = DecodeSh(std::span(
      reinterpret_cast<const std::uint8_t*>(r->body.data()), r->body.size()));
  const ShCoefficients want = *service_.Position(s, p).last_estimate;
  for (int i = 0; i < kShValueCount; ++i) {
    CHECK(got.values[i] == static_cast<double>(static_cast<float>(want.values[i])));
  }
}

TEST_CASE_FIXTURE(ServerFixture, "error statuses") {
  const std::string s = NewSession();
  const std::string p = NewPosition(s);

  SUBCASE("bad anchor count") {
    auto r = client_->Post("/sessions", json{{"anchor_count", 7}}.dump(), "application/json");
    REQUIRE(r);
    CHECK(r->status == 400);
    CHECK(ErrorBody(r).at("error") == "invalid-argument");
  }
  SUBCASE("bad json") {
    auto r = client_->Post("/sessions", "{nope", "application/json");
    REQUIRE(r);
    CHECK(r->status == 400);
  }
  SUBCASE("unknown session") {
    auto r = client_->Get("/sessions/abc");
    REQUIRE(r);
    CHECK(r->status == 404);
    CHECK(ErrorBody(r).at("error") == "not-found");
    CHECK(PostPacket("abc", p, Encode(SomeCloud(2)))->status == 404);
  }
  SUBCASE("unknown position") {
    CHECK(PostPacket(s, "pos-42", Encode(SomeCloud(2)))->status == 404);
  }
  SUBCASE("wrong media type") {
    auto r = PostPacket(s, p, Encode(SomeCloud(2)), "text/plain");
    REQUIRE(r);
    CHECK(r->status == 415);
    ErrorBody(r);
  }
  SUBCASE("nothing observed") {
    auto r = PostPacket(s, p, Encode(UnitSphereCloud(1280)));
    REQUIRE(r);
    CHECK(r->status == 422);
    CHECK(ErrorBody(r).at("error") == "insufficient-observation");
  }
  SUBCASE("anchor mismatch") {
    auto r = PostPacket(s, p, Encode(UnitSphereCloud(640)));
    REQUIRE(r);
    CHECK(r->status == 400);
  }
}

TEST_CASE_FIXTURE(ServerFixture, "malformed packets are rejected without mutation") {
  const std::string s = NewSession();
  const std::string p = NewPosition(s);
  REQUIRE(PostPacket(s, p, Encode(SomeCloud(3)))->status == 200);
  const PositionSnapshot before = service_.Position(s, p);

  const Bytes good = Encode(SomeCloud(4));
  struct Case {
    Bytes packet;
    std::string kind;
  };
  std::vector<Case> cases;
  {
    Bytes b = good;
    b[1] = 'Q';
    cases.push_back({b, "bad-magic"});
  }
  {
    Bytes b = good;
    b[4] = 2;
    cases.push_back({b, "unsupported-version"});
  }
  {
    Bytes b = good;
    b.resize(b.size() - 3);
    cases.push_back({b, "truncated"});
  }
  {
    Bytes b = good;
    b.push_back(0);
    cases.push_back({b, "length-mismatch"});
  }
  {
    Bytes b = good;
    b[10] = 0xff;
    b[11] = 0xff;
    cases.push_back({b, "index-out-of-range"});
  }
  cases.push_back({Bytes{'X', 'S'}, "truncated"});
  for (const Case& c : cases) {
    CAPTURE(c.kind);
    auto r = PostPacket(s, p, c.packet);
    REQUIRE(r);
    CHECK(r->status == 400);
    const json body = ErrorBody(r);
    CHECK(body.at("error") == "malformed-packet");
    CHECK(body.at("kind") == c.kind);
  }
  const PositionSnapshot after = service_.Position(s, p);
  CHECK(after.accumulated == before.accumulated);
  CHECK(after.last_estimate == before.last_estimate);
}

TEST_CASE_FIXTURE(ServerFixture, "share query parameter") {
  const std::string s = NewSession();
  const std::string p = NewPosition(s);
  const std::string twin = NewPosition(s);
  auto r = client_->Post("/sessions/" + s + "/positions/" + p + "/estimate?share=1",
                         [&] {
                           const Bytes b = Encode(SomeCloud(5));
                           return std::string(b.begin(), b.end());
                         }(),
                         "application/octet-stream");
  REQUIRE(r);
  CHECK(r->status == 200);
  CHECK(service_.Position(s, twin).accumulated == service_.Position(s, p).accumulated);
}

TEST_CASE_FIXTURE(ServerFixture, "http endpoint client") {
  HttpEndpoint endpoint(Url());
  const std::string s = endpoint.CreateSession(1280);
  const std::string p = endpoint.RegisterPosition(s, {1, 2, 3});
  CHECK(endpoint.JoinSession(s).position_ids == std::vector<std::string>{p});
  const ShCoefficients sh = endpoint.Estimate(s, p, Encode(SomeCloud(6)));
  CHECK(sh == DecodeSh(EncodeSh(*service_.Position(s, p).last_estimate)));

  try {
    endpoint.Estimate(s, "pos-77", Encode(SomeCloud(6)));
    FAIL("expected a remote error");
  } catch (const RemoteError& e) {
    CHECK(e.status() == 404);
    CHECK(e.code() == "not-found");
  }
  CHECK_THROWS_AS(endpoint.CreateSession(3), RemoteError);
}

TEST_CASE("http endpoint reports an unreachable server") {
  HttpEndpoint endpoint("http://127.0.0.1:1");
  CHECK_THROWS(endpoint.CreateSession(1280));
}

}  // namespace
}  // namespace edgelight
