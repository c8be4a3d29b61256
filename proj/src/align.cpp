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

#include "gecval/align.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>

#include "gecval/error.hpp"

namespace gecval {

namespace {

std::vector<char32_t> code_points(std::string_view text) {
  std::vector<char32_t> out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    char32_t cp = lead;
    if (lead >= 0xC0 && lead < 0xE0) {
      len = 2;
      cp = lead & 0x1F;
    } else if (lead >= 0xE0 && lead < 0xF0) {
      len = 3;
      cp = lead & 0x0F;
    } else if (lead >= 0xF0 && lead < 0xF8) {
      len = 4;
      cp = lead & 0x07;
    }
    bool valid = len > 1 && i + len <= text.size();
    for (std::size_t k = 1; valid && k < len; ++k) {
      const auto c = static_cast<unsigned char>(text[i + k]);
      if ((c & 0xC0) != 0x80) valid = false;
      else cp = (cp << 6) | (c & 0x3F);
    }
    if (!valid) {
      out.push_back(lead);
      ++i;
    } else {
      out.push_back(cp);
      i += len;
    }
  }
  return out;
}

bool same_ignoring_case(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto x = static_cast<unsigned char>(a[i]);
    const auto y = static_cast<unsigned char>(b[i]);
    if (x != y && !(x < 0x80 && y < 0x80 && std::tolower(x) == std::tolower(y))) return false;
  }
  return true;
}

}  // namespace

std::size_t char_length(std::string_view text) { return code_points(text).size(); }

std::size_t levenshtein(std::string_view a, std::string_view b) {
  const auto x = code_points(a);
  const auto y = code_points(b);
  std::vector<std::size_t> prev(y.size() + 1), cur(y.size() + 1);
  for (std::size_t j = 0; j <= y.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= y.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[y.size()];
}

double lev_similarity(std::string_view a, std::string_view b) {
  const std::size_t norm = char_length(b);
  if (norm == 0) fail(ErrorKind::invalid_argument, "lev_similarity: normalizing string is empty");
  return 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(norm);
}

Alignment token_align(std::span<const std::string> source, std::span<const std::string> target) {
  const std::size_t n = source.size();
  const std::size_t m = target.size();
  const std::size_t w = m + 1;
  std::vector<int> cost((n + 1) * w);
  auto at = [&](std::size_t i, std::size_t j) -> int& { return cost[i * w + j]; };

  auto sub_cost = [&](std::size_t i, std::size_t j) {
    if (source[i] == target[j]) return AlignCosts::match;
    return same_ignoring_case(source[i], target[j]) ? AlignCosts::case_change : AlignCosts::substitute;
  };

  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = static_cast<int>(i) * AlignCosts::remove;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = static_cast<int>(j) * AlignCosts::insert;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      at(i, j) = std::min({at(i - 1, j - 1) + sub_cost(i - 1, j - 1), at(i - 1, j) + AlignCosts::remove,
                           at(i, j - 1) + AlignCosts::insert});

  Alignment out;
  out.cost = at(n, m) / 10.0;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const int diag = sub_cost(i - 1, j - 1);
      if (at(i, j) == at(i - 1, j - 1) + diag) {
        out.ops.push_back({diag == AlignCosts::match ? AlignKind::match : AlignKind::substitute, i - 1, j - 1});
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + AlignCosts::remove) {
      out.ops.push_back({AlignKind::remove, i - 1, j});
      --i;
      continue;
    }
    out.ops.push_back({AlignKind::insert, i, j - 1});
    --j;
  }
  std::reverse(out.ops.begin(), out.ops.end());
  return out;
}

std::vector<Edit> extract_edits(std::span<const std::string> source, std::span<const std::string> target) {
  const Alignment alignment = token_align(source, target);
  std::vector<Edit> edits;
  std::size_t src = 0;
  bool open = false;
  Edit current;
  for (const AlignmentOp& op : alignment.ops) {
    if (op.kind == AlignKind::match) {
      if (open) {
        current.end = src;
        edits.push_back(std::move(current));
        current = Edit{};
        open = false;
      }
      ++src;
      continue;
    }
    if (!open) {
      current.start = src;
      current.etype = "UNK";
      open = true;
    }
    if (op.kind != AlignKind::insert) ++src;
    if (op.kind != AlignKind::remove) current.replacement.push_back(target[op.target]);
  }
  if (open) {
    current.end = src;
    edits.push_back(std::move(current));
  }
  return edits;
}

}  // namespace gecval
