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

// Byte-for-byte comparison against files in tests/golden. Setting
// PATHWEAVER_UPDATE_GOLDEN=1 rewrites them instead.

#pragma once

#include <cstdlib>
#include <fstream>
#include <string>

#include "support/scenarios.hpp"

namespace pathweaver::testing {

/// Empty string when `actual` matches the golden file `name`.
inline std::string compare_golden(const std::string& name, const std::string& actual) {
  const auto path = source_path("tests/golden/" + name);
  if (const char* update = std::getenv("PATHWEAVER_UPDATE_GOLDEN"); update && std::string(update) == "1") {
    std::ofstream(path, std::ios::binary) << actual;
    return "";
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) return "missing golden file " + path.string();
  const std::string expected = read_text(path);
  if (expected == actual) return "";
  std::size_t at = 0;
  while (at < expected.size() && at < actual.size() && expected[at] == actual[at]) ++at;
  return name + " differs at byte " + std::to_string(at) + " (expected " + std::to_string(expected.size()) +
         " bytes, got " + std::to_string(actual.size()) + ")";
}

}  // namespace pathweaver::testing
