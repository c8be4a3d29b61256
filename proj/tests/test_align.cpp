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

#include <doctest.h>

#include "gecval/align.hpp"
#include "gecval/error.hpp"
#include "gecval/lattice.hpp"
#include "synthetic.hpp"

using namespace gecval;

namespace {

// Plain O(nm) table over bytes; only used on ASCII inputs.
std::size_t naive_distance(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] != b[j - 1])});
  return d[a.size()][b.size()];
}

}  // namespace

TEST_CASE("levenshtein on hand examples") {
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("", "abc") == 3);
  CHECK(levenshtein("abc", "") == 3);
  CHECK(levenshtein("same", "same") == 0);
  CHECK(levenshtein("flaw", "lawn") == 2);
}

TEST_CASE("levenshtein counts code points, not bytes") {
  CHECK(char_length("naïve") == 5);
  CHECK(levenshtein("naïve", "naive") == 1);
  CHECK(levenshtein("日本語", "日本") == 1);
}

TEST_CASE("levenshtein agrees with a naive table on random strings") {
  Rng rng(12);
  for (int round = 0; round < 300; ++round) {
    std::string a, b;
    const auto la = rng.below(12), lb = rng.below(12);
    for (std::uint64_t i = 0; i < la; ++i) a += static_cast<char>('a' + rng.below(4));
    for (std::uint64_t i = 0; i < lb; ++i) b += static_cast<char>('a' + rng.below(4));
    CHECK(levenshtein(a, b) == naive_distance(a, b));
    CHECK(levenshtein(a, b) == levenshtein(b, a));
  }
}

TEST_CASE("similarity is normalized by the second string") {
  CHECK(lev_similarity("abcdefghij", "abcdefghiX") == doctest::Approx(0.9));
  CHECK(lev_similarity("same", "same") == 1.0);
  CHECK(lev_similarity("abcdef", "ab") == doctest::Approx(1.0 - 4.0 / 2.0));
  CHECK_THROWS_AS(lev_similarity("abc", ""), Error);
}

TEST_CASE("token alignment prefers matches and treats case changes as cheap") {
  const Tokens src = tokenize("the cat sat");
  const Tokens tgt = tokenize("The cat sat down");
  const Alignment al = token_align(src, tgt);
  REQUIRE(al.ops.size() == 4);
  CHECK(al.ops[0].kind == AlignKind::substitute);
  CHECK(al.ops[1].kind == AlignKind::match);
  CHECK(al.ops[2].kind == AlignKind::match);
  CHECK(al.ops[3].kind == AlignKind::insert);
  CHECK(al.cost == doctest::Approx(1.1));
}

TEST_CASE("extracted edits on a hand example") {
  const Tokens src = tokenize("he go to school");
  const Tokens tgt = tokenize("he goes to the school");
  const auto edits = extract_edits(src, tgt);
  REQUIRE(edits.size() == 2);
  CHECK(edits[0].start == 1);
  CHECK(edits[0].end == 2);
  CHECK(edits[0].replacement == Tokens{"goes"});
  CHECK(edits[1].start == 3);
  CHECK(edits[1].end == 3);
  CHECK(edits[1].replacement == Tokens{"the"});
  CHECK(edits[0].etype == "UNK");
  CHECK(extract_edits(src, src).empty());
  CHECK(apply_edits(tokenize("a b"), extract_edits(tokenize("a b"), Tokens{})).empty());
}

TEST_CASE("applying extracted edits reproduces the target") {
  const Corpus c = testing::synthetic_corpus(17);
  Rng rng(5);
  int checked = 0;
  for (int round = 0; round < 400; ++round) {
    const std::size_t r = rng.below(c.size());
    const std::size_t a = rng.below(c.records[r].annotations.size());
    const auto n = c.records[r].annotations[a].edits.size();
    const Correction x{{r, a}, EditSet(rng() & EditSet::full(n).bits())};
    const Correction y{{r, a}, EditSet(rng() & EditSet::full(n).bits())};
    const Tokens src = realize(c, x);
    const Tokens tgt = realize(c, y);
    CHECK(apply_edits(src, extract_edits(src, tgt)) == tgt);
    ++checked;
  }
  CHECK(checked == 400);
}
