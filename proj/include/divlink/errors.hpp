// Copyright 2026 The divlink Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace divlink {

// Exit codes used by the CLI; library exceptions map onto them.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitInfeasible = 3,
  kExitSizeGuard = 4,
};

// Malformed or out-of-range input: bad files, parameter ranges, alphabet
// mismatches, overlap/coverage violations.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A requested construction admits no solution (e.g. no equivalence class can
// meet the support constraint).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exhaustive enumeration was rejected because its search space exceeds the
// built-in work cap.
class SizeGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace divlink
