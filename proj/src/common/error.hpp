// Copyright 2026 The DNSC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DNSC_COMMON_ERROR_HPP_
#define DNSC_COMMON_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace dnsc {

// Error categories shared by every module. The C API maps these 1:1 onto
// dnsc_status values, so the numeric order is part of the ABI.
enum class ErrorKind {
  kConfig = 1,
  kFormat,
  kUnsupported,
  kIo,
  kData,
  kShape,
  kStructure,
  kIndex,
  kNumeric,
  kTraining,
  kDomain,
  kCorruption,
  kTruncation,
  kUsage,
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(ErrorKindName(kind)) + " error: " +
                           message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void Require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) Fail(kind, message);
}

}  // namespace dnsc

#endif  // DNSC_COMMON_ERROR_HPP_
