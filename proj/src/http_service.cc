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

#include "edgelight/http_service.h"

#include <httplib.h>
#include <json.hpp>

#include "edgelight/codec.h"
#include "edgelight/errors.h"

namespace edgelight {
namespace {

using nlohmann::json;

constexpr char kJson[] = "application/json";
constexpr char kOctets[] = "application/octet-stream";

void SetError(httplib::Response& res, int status, const std::string& code,
              const std::string& kind, const std::string& message) {
  res.status = status;
  json body = {{"error", code}, {"kind", kind}, {"message", message}};
  res.set_content(body.dump() + "\n", kJson);
}

// Maps the service's exception types onto status codes.
template <typename Fn>
void Guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const MalformedPacket& e) {
    SetError(res, 400, "malformed-packet", std::string(ToString(e.kind())),
             e.what());
  } catch (const InvalidArgument& e) {
    SetError(res, 400, "invalid-argument", "invalid-argument", e.what());
  } catch (const json::exception& e) {
    SetError(res, 400, "invalid-argument", "bad-json", e.what());
  } catch (const NotFound& e) {
    SetError(res, 404, "not-found", "not-found", e.what());
  } catch (const InsufficientObservation& e) {
    SetError(res, 422, "insufficient-observation", "insufficient-observation",
             e.what());
  } catch (const std::exception& e) {
    SetError(res, 500, "internal", "internal", e.what());
  }
}

json DescriptorJson(const SessionDescriptor& d) {
  return {{"session_id", d.session_id},
          {"anchor_count", d.anchor_count},
          {"created_at_ms", d.created_at_ms},
          {"positions", d.position_ids}};
}

}  // namespace

HttpEdgeServer::HttpEdgeServer(EdgeService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  InstallRoutes();
}

HttpEdgeServer::~HttpEdgeServer() { Stop(); }

void HttpEdgeServer::InstallRoutes() {
  server_->Post("/sessions", [this](const httplib::Request& req,
                                    httplib::Response& res) {
    Guarded(res, [&] {
      const json body = json::parse(req.body);
      const std::string id = service_.CreateSession(body.at("anchor_count").get<int>());
      res.status = 201;
      res.set_content(json{{"session_id", id}}.dump(), kJson);
    });
  });

  server_->Get(R"(/sessions/([0-9A-Za-z_-]+))", [this](const httplib::Request& req,
                                                     httplib::Response& res) {
    Guarded(res, [&] {
      res.set_content(DescriptorJson(service_.JoinSession(req.matches[1])).dump(),
                      kJson);
    });
  });

  server_->Post(R"(/sessions/([0-9A-Za-z_-]+)/positions)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  Guarded(res, [&] {
                    const json body = json::parse(req.body);
                    const Vec3 p{body.at("x").get<double>(), body.at("y").get<double>(),
                                 body.at("z").get<double>()};
                    const std::string id = service_.RegisterPosition(req.matches[1], p);
                    res.status = 201;
                    res.set_content(json{{"position_id", id}}.dump(), kJson);
                  });
                });

  server_->Post(
      R"(/sessions/([0-9A-Za-z_-]+)/positions/([0-9A-Za-z_-]+)/estimate)",
      [this](const httplib::Request& req, httplib::Response& res) {
        Guarded(res, [&] {
          const std::string content_type = req.get_header_value("Content-Type");
          if (content_type.rfind(kOctets, 0) != 0) {
            SetError(res, 415, "unsupported-media-type", "unsupported-media-type",
                     "estimate expects application/octet-stream");
            return;
          }
          const bool share = req.has_param("share") && req.get_param_value("share") == "1";
          const auto* data = reinterpret_cast<const std::uint8_t*>(req.body.data());
          const ShCoefficients sh = service_.Estimate(
              req.matches[1], req.matches[2], {data, req.body.size()}, share);
          const Bytes payload = EncodeSh(sh);
          res.set_content(reinterpret_cast<const char*>(payload.data()),
                          payload.size(), kOctets);
        });
      });
}

int HttpEdgeServer::Start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
    if (bound < 0) throw std::runtime_error("cannot bind " + host);
  } else if (!server_->bind_to_port(host, port)) {
    throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void HttpEdgeServer::Run(const std::string& host, int port) {
  if (!server_->listen(host, port)) {
    throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
  }
}

void HttpEdgeServer::Stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

namespace {

[[noreturn]] void ThrowRemote(const httplib::Result& result) {
  if (!result) {
    throw RemoteError(0, "connection", httplib::to_string(result.error()));
  }
  std::string code = "http-" + std::to_string(result->status);
  std::string message = result->body;
  try {
    const json body = json::parse(result->body);
    code = body.at("error").get<std::string>();
    message = body.value("kind", "") + ": " + body.value("message", "");
  } catch (const json::exception&) {
  }
  throw RemoteError(result->status, code, message);
}

}  // namespace

HttpEndpoint::HttpEndpoint(const std::string& base_url)
    : client_(std::make_unique<httplib::Client>(base_url)) {
  client_->set_keep_alive(true);
}

HttpEndpoint::~HttpEndpoint() = default;

std::string HttpEndpoint::CreateSession(int anchor_count) {
  auto result = client_->Post("/sessions", json{{"anchor_count", anchor_count}}.dump(),
                              kJson);
  if (!result || result->status != 201) ThrowRemote(result);
  return json::parse(result->body).at("session_id").get<std::string>();
}

std::string HttpEndpoint::RegisterPosition(const std::string& session_id,
                                           const Vec3& world_position) {
  auto result = client_->Post(
      "/sessions/" + session_id + "/positions",
      json{{"x", world_position.x}, {"y", world_position.y}, {"z", world_position.z}}
          .dump(),
      kJson);
  if (!result || result->status != 201) ThrowRemote(result);
  return json::parse(result->body).at("position_id").get<std::string>();
}

ShCoefficients HttpEndpoint::Estimate(const std::string& session_id,
                                      const std::string& position_id,
                                      std::span<const std::uint8_t> packet) {
  auto result = client_->Post(
      "/sessions/" + session_id + "/positions/" + position_id + "/estimate",
      reinterpret_cast<const char*>(packet.data()), packet.size(), kOctets);
  if (!result || result->status != 200) ThrowRemote(result);
  const auto* data = reinterpret_cast<const std::uint8_t*>(result->body.data());
  return DecodeSh({data, result->body.size()});
}

SessionDescriptor HttpEndpoint::JoinSession(const std::string& session_id) {
  auto result = client_->Get("/sessions/" + session_id);
  if (!result || result->status != 200) ThrowRemote(result);
  const json body = json::parse(result->body);
  return {body.at("session_id").get<std::string>(), body.at("anchor_count").get<int>(),
          body.at("created_at_ms").get<std::int64_t>(),
          body.at("positions").get<std::vector<std::string>>()};
}

}  // namespace edgelight
