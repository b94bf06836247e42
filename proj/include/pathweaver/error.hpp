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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pathweaver {

// Failure codes for precondition violations across the library. Defects and
// validation findings are reported as data, never through these.
enum class ErrorCode {
  InvalidId,
  UnknownItem,
  NotAField,
  AlreadyDecided,
  BlockedByMax,
  ExcludesCommon,
  PendingConflict,
  InvalidModel,
  ModelTooLarge,
  InvalidSelection,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidId: return "InvalidId";
    case ErrorCode::UnknownItem: return "UnknownItem";
    case ErrorCode::NotAField: return "NotAField";
    case ErrorCode::AlreadyDecided: return "AlreadyDecided";
    case ErrorCode::BlockedByMax: return "BlockedByMax";
    case ErrorCode::ExcludesCommon: return "ExcludesCommon";
    case ErrorCode::PendingConflict: return "PendingConflict";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::ModelTooLarge: return "ModelTooLarge";
    case ErrorCode::InvalidSelection: return "InvalidSelection";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pathweaver
