// Copyright 2026 The Prefeval Authors.
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

#ifndef PREFEVAL_BT_SUBGROUP_H_
#define PREFEVAL_BT_SUBGROUP_H_

#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "prefeval/core/types.h"

namespace prefeval::bt {

// Restricts a log to one slice. An empty filter selects everything.
struct SubgroupFilter {
  std::optional<LanguageCode> language;
  std::optional<std::string> domain;
  std::optional<Subset> subset;
  // When non-empty, only records whose two systems are both listed.
  std::vector<std::string> systems;

  bool Matches(const ComparisonRecord& record) const;
  bool empty() const;
  // Stable textual key, e.g. "language=hin;subset=symbolic".
  std::string Key() const;

  friend bool operator==(const SubgroupFilter&, const SubgroupFilter&) = default;
};

// Builds a filter from command-line or query-string values. Empty strings
// leave a dimension open; `systems_csv` is a comma-separated id list.
absl::StatusOr<SubgroupFilter> ParseFilter(absl::string_view language,
                                           absl::string_view domain,
                                           absl::string_view subset,
                                           absl::string_view systems_csv);

}  // namespace prefeval::bt

#endif  // PREFEVAL_BT_SUBGROUP_H_
