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

#include "prefeval/bt/subgroup.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "prefeval/core/status_macros.h"

namespace prefeval::bt {

bool SubgroupFilter::Matches(const ComparisonRecord& record) const {
  if (language.has_value() && record.language != *language) return false;
  if (domain.has_value() && record.domain != *domain) return false;
  if (subset.has_value() && record.subset != *subset) return false;
  if (!systems.empty()) {
    auto listed = [this](const std::string& id) {
      return std::find(systems.begin(), systems.end(), id) != systems.end();
    };
    if (!listed(record.system_a) || !listed(record.system_b)) return false;
  }
  return true;
}

bool SubgroupFilter::empty() const {
  return !language && !domain && !subset && systems.empty();
}

std::string SubgroupFilter::Key() const {
  std::vector<std::string> parts;
  if (language) parts.push_back(absl::StrCat("language=", language->code()));
  if (domain) parts.push_back(absl::StrCat("domain=", *domain));
  if (subset) parts.push_back(absl::StrCat("subset=", ToString(*subset)));
  if (!systems.empty()) {
    std::vector<std::string> sorted = systems;
    std::sort(sorted.begin(), sorted.end());
    parts.push_back(absl::StrCat("systems=", absl::StrJoin(sorted, ",")));
  }
  return absl::StrJoin(parts, ";");
}

absl::StatusOr<SubgroupFilter> ParseFilter(absl::string_view language,
                                           absl::string_view domain,
                                           absl::string_view subset,
                                           absl::string_view systems_csv) {
  SubgroupFilter filter;
  if (!language.empty()) {
    PREFEVAL_ASSIGN_OR_RETURN(filter.language, LanguageCode::Parse(language));
  }
  if (!domain.empty()) filter.domain = std::string(domain);
  if (!subset.empty()) {
    PREFEVAL_ASSIGN_OR_RETURN(filter.subset, ParseSubset(subset));
  }
  for (absl::string_view id :
       absl::StrSplit(systems_csv, ',', absl::SkipWhitespace())) {
    filter.systems.emplace_back(id);
  }
  return filter;
}

}  // namespace prefeval::bt
