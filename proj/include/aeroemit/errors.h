// Copyright 2026 The AeroEmit Authors.
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

#ifndef AEROEMIT_ERRORS_H_
#define AEROEMIT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace aeroemit {

// Bad input or configuration: missing file, header mismatch, duplicate
// primary key, invalid config value. The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A previously produced artifact is missing or unreadable. The CLI maps
// this to exit code 3.
class ArtifactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace aeroemit

#endif  // AEROEMIT_ERRORS_H_
