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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gecval/corpus.hpp"

namespace gecval {

/// Unit-cost edit distance over Unicode code points (UTF-8 input; bytes that
/// do not decode count as one character each).
std::size_t levenshtein(std::string_view a, std::string_view b);
std::size_t char_length(std::string_view text);

/// 1 - levenshtein(a, b) / len(b). Not clipped, so it can go below zero.
/// Throws invalid_argument when b is empty.
double lev_similarity(std::string_view a, std::string_view b);

enum class AlignKind { match, substitute, insert, remove };

struct AlignmentOp {
  AlignKind kind = AlignKind::match;
  std::size_t source = 0;  // index of the source token consumed (insert: position before which)
  std::size_t target = 0;  // index of the target token produced (remove: position before which)
};

struct Alignment {
  std::vector<AlignmentOp> ops;
  double cost = 0.0;
};

/// Costs used by token_align, in tenths.
struct AlignCosts {
  static constexpr int match = 0;
  static constexpr int case_change = 1;
  static constexpr int substitute = 10;
  static constexpr int insert = 10;
  static constexpr int remove = 10;
};

/// Minimal-cost token alignment. Ties are broken towards match, then
/// substitute, then remove, then insert, walking back from the end.
Alignment token_align(std::span<const std::string> source, std::span<const std::string> target);

/// Collapses each maximal run of non-match operations into one edit typed
/// "UNK". Applying the result to `source` yields `target` exactly.
std::vector<Edit> extract_edits(std::span<const std::string> source, std::span<const std::string> target);

}  // namespace gecval
