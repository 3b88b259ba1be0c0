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

#include "common/error.hpp"

namespace dnsc {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kFormat: return "format";
    case ErrorKind::kUnsupported: return "unsupported";
    case ErrorKind::kIo: return "I/O";
    case ErrorKind::kData: return "data";
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kStructure: return "structure";
    case ErrorKind::kIndex: return "index";
    case ErrorKind::kNumeric: return "numeric";
    case ErrorKind::kTraining: return "training";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kCorruption: return "corruption";
    case ErrorKind::kTruncation: return "truncation";
    case ErrorKind::kUsage: return "usage";
  }
  return "unknown";
}

}  // namespace dnsc
