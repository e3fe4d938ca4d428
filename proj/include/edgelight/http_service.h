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

#ifndef EDGELIGHT_HTTP_SERVICE_H_
#define EDGELIGHT_HTTP_SERVICE_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <thread>

#include "edgelight/edge_service.h"
#include "edgelight/estimator.h"

namespace httplib {
class Server;
class Client;
}  // namespace httplib

namespace edgelight {

// HTTP front end for EdgeService.
//
//   POST /sessions                               {"anchor_count":N} -> {"session_id":..}
//   GET  /sessions/{id}                          -> descriptor
//   POST /sessions/{id}/positions                {"x":..,"y":..,"z":..} -> {"position_id":..}
//   POST /sessions/{id}/positions/{pid}/estimate packet octets -> 108 SH octets
//
// The estimate route takes application/octet-stream; `?share=1` turns on
// observation sharing. Failures carry a one-line JSON body
// {"error":<code>,"kind":<detail code>,"message":..}.
class HttpEdgeServer {
 public:
  explicit HttpEdgeServer(EdgeService& service);
  ~HttpEdgeServer();

  // Binds and serves on a background thread. Port 0 picks a free port.
  // Returns the bound port.
  int Start(const std::string& host, int port);
  // Binds and serves on the calling thread until Stop().
  void Run(const std::string& host, int port);
  void Stop();

 private:
  void InstallRoutes();

  EdgeService& service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

// Client-side view of an edge server.
class EdgeEndpoint {
 public:
  virtual ~EdgeEndpoint() = default;
  virtual std::string CreateSession(int anchor_count) = 0;
  virtual std::string RegisterPosition(const std::string& session_id,
                                       const Vec3& world_position) = 0;
  virtual ShCoefficients Estimate(const std::string& session_id,
                                  const std::string& position_id,
                                  std::span<const std::uint8_t> packet) = 0;
};

class InProcessEndpoint final : public EdgeEndpoint {
 public:
  explicit InProcessEndpoint(EdgeService& service) : service_(service) {}

  std::string CreateSession(int anchor_count) override {
    return service_.CreateSession(anchor_count);
  }
  std::string RegisterPosition(const std::string& session_id,
                               const Vec3& world_position) override {
    return service_.RegisterPosition(session_id, world_position);
  }
  ShCoefficients Estimate(const std::string& session_id,
                          const std::string& position_id,
                          std::span<const std::uint8_t> packet) override {
    return service_.Estimate(session_id, position_id, packet);
  }

 private:
  EdgeService& service_;
};

// Raised by HttpEndpoint for non-success responses.
class RemoteError : public std::runtime_error {
 public:
  RemoteError(int status, std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message),
        status_(status),
        code_(std::move(code)) {}

  int status() const { return status_; }
  const std::string& code() const { return code_; }

 private:
  int status_;
  std::string code_;
};

class HttpEndpoint final : public EdgeEndpoint {
 public:
  // `base_url` like "http://127.0.0.1:8080".
  explicit HttpEndpoint(const std::string& base_url);
  ~HttpEndpoint() override;

  std::string CreateSession(int anchor_count) override;
  std::string RegisterPosition(const std::string& session_id,
                               const Vec3& world_position) override;
  ShCoefficients Estimate(const std::string& session_id,
                          const std::string& position_id,
                          std::span<const std::uint8_t> packet) override;
  SessionDescriptor JoinSession(const std::string& session_id);

 private:
  std::unique_ptr<httplib::Client> client_;
};

}  // namespace edgelight

#endif  // EDGELIGHT_HTTP_SERVICE_H_
