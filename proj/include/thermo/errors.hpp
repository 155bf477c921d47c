// Copyright 2026 The Thermo Authors
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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace thermo {

/// Malformed arguments: wrong depth, out-of-range weights, bad shapes.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation would exceed one of the configured size caps.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& cap_name, std::int64_t requested,
                std::int64_t cap)
      : std::runtime_error(cap_name + " cap exceeded: requested " +
                           std::to_string(requested) + " > cap " +
                           std::to_string(cap)),
        cap_name_(cap_name),
        requested_(requested),
        cap_(cap) {}

  const std::string& cap_name() const { return cap_name_; }
  std::int64_t requested() const { return requested_; }
  std::int64_t cap() const { return cap_; }

 private:
  std::string cap_name_;
  std::int64_t requested_;
  std::int64_t cap_;
};

/// An iterative solver stopped without meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace thermo
