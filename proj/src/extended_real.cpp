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


#include "thermo/extended_real.hpp"

#include <charconv>

namespace thermo {

std::string ExtendedReal::to_string() const {
  if (is_plus_infinity()) return "+inf";
  if (is_minus_infinity()) return "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value_,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace thermo
