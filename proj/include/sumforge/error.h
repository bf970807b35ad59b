// Copyright 2026 The sumforge Authors.
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

#ifndef SUMFORGE_ERROR_H_
#define SUMFORGE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace sumforge {

enum class ErrorCode {
  kEmptyCorpus,
  kEmptyModelRequest,
  kDanglingMarker,
  kMalformedModel,
  kSpanOutOfRange,
  kEmptyDocument,
  kInvalidArgument,
  kMalformedLine,
  kMissingField,
  kEmptyField,
  kEmptyDataset,
  kBackendFailure,
  kNoCandidates,
  kLengthMismatch,
  kCheckpointCorrupt,
  kConfig,
  kIo,
};

// Stable identifier used in CLI diagnostics, e.g. "MissingField".
std::string_view error_code_name(ErrorCode code);

// All library failures are reported as sumforge::Error. The code is
// machine-checkable; what() carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sumforge

#endif  // SUMFORGE_ERROR_H_
