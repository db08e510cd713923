// Copyright 2026 The triagelab Authors
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

#ifndef TRIAGE_IDS_HPP_
#define TRIAGE_IDS_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>

namespace triage {

// Integer identifier that does not convert to or from other identifiers.
template <typename Tag>
struct StrongId {
  std::int64_t value = 0;

  constexpr StrongId() = default;
  constexpr explicit StrongId(std::int64_t v) : value(v) {}

  friend constexpr auto operator<=>(const StrongId&,
                                    const StrongId&) = default;
  friend std::ostream& operator<<(std::ostream& os, const StrongId& id) {
    return os << id.value;
  }
};

struct BugTag {};
struct DevTag {};

using BugId = StrongId<BugTag>;
using DevId = StrongId<DevTag>;

// Whole days counted from the dataset epoch.
using Day = std::int32_t;

}  // namespace triage

template <typename Tag>
struct std::hash<triage::StrongId<Tag>> {
  std::size_t operator()(const triage::StrongId<Tag>& id) const noexcept {
    return std::hash<std::int64_t>{}(id.value);
  }
};

#endif  // TRIAGE_IDS_HPP_
