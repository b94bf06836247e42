// Copyright 2026 The Pathweaver Authors
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

// A recorded 15-request session against the bundled model, played over
// real HTTP on the loopback interface.

#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>

#include "pathweaver/http.hpp"
#include "pathweaver/service.hpp"
#include "support/scenarios.hpp"

namespace pathweaver::testing {

inline constexpr const char* kFixedClock = "2026-01-01T00:00:00Z";

struct ScriptStep {
  std::string method;
  std::string path;  // "{id}" is replaced with the session id
  std::string body;
};

inline std::vector<ScriptStep> recorded_script() {
  return {
      {"GET", "/api/v1/models", ""},
      {"POST", "/api/v1/sessions", R"({"model": "computer_science"})"},
      {"GET", "/api/v1/sessions/{id}", ""},
      {"POST", "/api/v1/sessions/{id}/select", R"({"item": "distributed systems"})"},
      {"GET", "/api/v1/sessions/{id}", ""},
      {"POST", "/api/v1/sessions/{id}/select", R"({"item": "data mining"})"},
      {"GET", "/api/v1/sessions/{id}", ""},
      {"POST", "/api/v1/sessions/{id}/exclude", R"({"item": "network operating systems"})"},
      {"POST", "/api/v1/sessions/{id}/select", R"({"item": "java"})"},
      {"POST", "/api/v1/sessions/{id}/exclude", R"({"item": "c++"})"},
      {"POST", "/api/v1/sessions/{id}/select", R"({"item": "structured programming"})"},
      {"POST", "/api/v1/sessions/{id}/select", R"({"item": "object oriented programming"})"},
      {"POST", "/api/v1/sessions/{id}/undo", ""},
      {"POST", "/api/v1/sessions/{id}/select", R"({"item": "research methods"})"},
      {"POST", "/api/v1/sessions/{id}/complete", ""},
  };
}

struct RecordedReply {
  int status = 0;
  std::string body;
};

/// Serves the bundled models on an ephemeral port with a fixed clock and
/// plays `script`. Throws if the server cannot be reached.
inline std::vector<RecordedReply> play_over_http(const std::vector<ScriptStep>& script) {
  service::Catalog catalog;
  catalog.add("computer_science", bundled_model());
  service::Options options;
  options.fixed_clock = kFixedClock;
  service::Service svc(std::move(catalog), options);

  httplib::Server server;
  http::bind(server, svc);
  const int port = server.bind_to_any_port("127.0.0.1");
  if (port <= 0) throw std::runtime_error("cannot bind a loopback port");
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  std::vector<RecordedReply> replies;
  std::string session;
  try {
    httplib::Client client("127.0.0.1", port);
    for (const ScriptStep& step : script) {
      std::string path = step.path;
      if (auto at = path.find("{id}"); at != std::string::npos) path.replace(at, 4, session);
      httplib::Result res = step.method == "GET" ? client.Get(path) : client.Post(path, step.body, "application/json");
      if (!res) throw std::runtime_error("request failed: " + step.method + " " + path);
      replies.push_back({res->status, res->body});
      if (step.path == "/api/v1/sessions" && res->status == 201) {
        session = nlohmann::json::parse(res->body).at("id").get<std::string>();
      }
    }
  } catch (...) {
    server.stop();
    worker.join();
    throw;
  }
  server.stop();
  worker.join();
  return replies;
}

inline std::string transcript(const std::vector<ScriptStep>& script, const std::vector<RecordedReply>& replies) {
  std::ostringstream out;
  for (std::size_t i = 0; i < replies.size(); ++i) {
    out << "> " << script[i].method << ' ' << script[i].path;
    if (!script[i].body.empty()) out << ' ' << script[i].body;
    out << "\n< " << replies[i].status << '\n' << replies[i].body;
  }
  return out.str();
}

}  // namespace pathweaver::testing
