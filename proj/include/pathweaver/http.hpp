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

// cpp-httplib binding for service::Service.

#pragma once

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

#include <httplib.h>

#include "pathweaver/service.hpp"

namespace pathweaver::http {

/// Renders a response body exactly as sent on the wire.
inline std::string render(const service::Response& r) { return r.body.dump(2) + "\n"; }

/// Routes every /api/ request to `svc`; other paths are served from
/// `static_dir` when given.
inline void bind(httplib::Server& server, service::Service& svc,
                 const std::optional<std::filesystem::path>& static_dir = std::nullopt) {
  auto forward = [&svc](const httplib::Request& req, httplib::Response& res) {
    service::Response r = svc.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(render(r), "application/json");
  };
  const std::string api = R"(/api/.*)";
  server.Get(api, forward);
  server.Post(api, forward);
  server.Put(api, forward);
  server.Delete(api, forward);
  server.Patch(api, forward);
  if (static_dir) server.set_mount_point("/", static_dir->string());
}

/// Model directory: PATHWEAVER_MODELS if set, otherwise `fallback`.
inline std::filesystem::path models_directory(const std::filesystem::path& fallback) {
  if (const char* env = std::getenv("PATHWEAVER_MODELS"); env && *env) return env;
  return fallback;
}

/// Fixed clock from PATHWEAVER_TEST_CLOCK, if set.
inline std::optional<std::string> test_clock() {
  if (const char* env = std::getenv("PATHWEAVER_TEST_CLOCK"); env && *env) return std::string(env);
  return std::nullopt;
}

}  // namespace pathweaver::http
