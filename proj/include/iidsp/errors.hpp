// Copyright 2026 The iidsp Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace iidsp {

// A configured enumeration or problem-size limit would be exceeded.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated an operation's precondition; voter() names the offender
// when the precondition is per-voter.
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what, std::ptrdiff_t voter = -1)
      : std::invalid_argument(what), voter_(voter) {}
  std::ptrdiff_t voter() const noexcept { return voter_; }

 private:
  std::ptrdiff_t voter_;
};

// Malformed or incomplete input file / text form.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace iidsp
