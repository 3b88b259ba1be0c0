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

#ifndef DNSC_CLI_VERIFY_HPP_
#define DNSC_CLI_VERIFY_HPP_

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace dnsc::cli {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

using CheckObserver = std::function<void(const CheckResult&)>;

// Runs the property suites against a trained run directory. Every check is
// attempted; checks that need the models are reported failed when loading
// fails. The observer, if set, sees each result as it completes.
std::vector<CheckResult> VerifyRun(const std::filesystem::path& run_dir,
                                   const CheckObserver& observer = {});

bool AllPassed(const std::vector<CheckResult>& results);

}  // namespace dnsc::cli

#endif  // DNSC_CLI_VERIFY_HPP_
