// Copyright 2026 The gecval Authors. All Rights Reserved.
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

#include "gecval/imeasure.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "gecval/error.hpp"

namespace gecval {

namespace {

constexpr std::size_t kMaxComponent = 24;

using EditKey = std::tuple<std::size_t, std::size_t, Tokens>;

std::size_t find(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

// Distinct token sequences realizable over the union span of `component`.
std::size_t component_alternatives(const Tokens& tokens, const std::vector<Edit>& component) {
  std::size_t lo = component.front().start;
  std::size_t hi = component.front().end;
  for (const Edit& e : component) {
    lo = std::min(lo, e.start);
    hi = std::max(hi, e.end);
  }
  const std::span<const std::string> window(tokens.data() + lo, hi - lo);
  std::set<Tokens> seen;
  const std::size_t n = component.size();
  std::vector<Edit> chosen;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    chosen.clear();
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (!((mask >> i) & 1U)) continue;
      for (const Edit& prior : chosen)
        if (edits_overlap(prior, component[i])) ok = false;
      chosen.push_back(component[i]);
    }
    if (!ok) continue;
    for (Edit& e : chosen) {
      e.start -= lo;
      e.end -= lo;
    }
    seen.insert(apply_edits(window, chosen));
  }
  return seen.size();
}

}  // namespace

BigCount count_imeasure_refs(const SentenceRecord& record) {
  std::map<EditKey, std::size_t> sharing;  // pooled edit -> number of annotations making it
  std::vector<Edit> pooled;
  for (const Annotation& annotation : record.annotations) {
    std::set<EditKey> local;
    for (const Edit& e : annotation.edits) {
      EditKey key{e.start, e.end, e.replacement};
      if (!local.insert(key).second) continue;
      if (sharing[key]++ == 0) {
        Edit bare{e.start, e.end, e.replacement, {}, {}};
        pooled.push_back(std::move(bare));
      }
    }
  }
  BigCount count = 1;
  if (pooled.empty()) return count;

  std::vector<std::size_t> parent(pooled.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t i = 0; i < pooled.size(); ++i)
    for (std::size_t j = i + 1; j < pooled.size(); ++j)
      if (edits_overlap(pooled[i], pooled[j])) parent[find(parent, i)] = find(parent, j);

  std::map<std::size_t, std::vector<Edit>> components;
  for (std::size_t i = 0; i < pooled.size(); ++i) components[find(parent, i)].push_back(pooled[i]);

  for (const auto& [root, component] : components) {
    if (component.size() == 1) {
      const Edit& e = component.front();
      const bool changes = !std::equal(e.replacement.begin(), e.replacement.end(),
                                       record.tokens.begin() + static_cast<std::ptrdiff_t>(e.start),
                                       record.tokens.begin() + static_cast<std::ptrdiff_t>(e.end));
      if (changes && sharing[{e.start, e.end, e.replacement}] < record.annotations.size()) count *= 2;
      continue;
    }
    if (component.size() > kMaxComponent)
      fail(ErrorKind::data, "sentence " + std::to_string(record.id) + ": " + std::to_string(component.size()) +
                                " mutually overlapping edits are too many to enumerate");
    count *= component_alternatives(record.tokens, component);
  }
  return count;
}

}  // namespace gecval
