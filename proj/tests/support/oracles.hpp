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

#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "gecval/corpus.hpp"
#include "gecval/lattice.hpp"

namespace gecval::testing {

/// Every pairwise non-overlapping subset of the pooled edits that keeps the
/// isolated edits all annotations agree on, applied and deduplicated.
std::size_t brute_force_imeasure_count(const SentenceRecord& record);

/// All 2^n subsets of n edits.
std::vector<EditSet> all_subsets(std::size_t n);

/// (lower, higher) masks over all subsets of n edits: strict containment, and
/// containment with exactly one extra edit.
std::set<std::pair<std::uint64_t, std::uint64_t>> scan_comparable(std::size_t n);
std::set<std::pair<std::uint64_t, std::uint64_t>> scan_single_edit(std::size_t n);

}  // namespace gecval::testing
