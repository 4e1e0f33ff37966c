// Copyright 2026 The dpskit Authors
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

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dpskit::cli {

enum ExitCode : int {
    kOk = 0,
    kInputError = 2,
    kDomainError = 3,
    kInvariantViolation = 4,
};

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`. Nothing is written to `out` or to output files when
/// the command fails.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace dpskit::cli
