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

#include "synthetic.hpp"

#include <algorithm>
#include <sstream>

#include "gecval/rng.hpp"

namespace gecval::testing {

const std::vector<std::string>& nucle_types() {
  static const std::vector<std::string> types = {
      "ArtOrDet", "Cit",  "Mec",  "Nn",  "Npos", "Others", "Pform", "Pref",  "Prep",  "Rloc-", "SVA", "Sfrag", "Smod", "Spar",
      "Srun",     "Ssub", "Trans", "Um", "V0",   "Vform",  "Vm",    "Vt",    "WOadv", "WOinc", "Wa",  "Wci",   "Wform"};
  return types;
}

std::string synthetic_m2(std::uint64_t seed, const SyntheticSpec& spec) {
  Rng rng(seed);
  auto between = [&](std::size_t lo, std::size_t hi) { return lo + static_cast<std::size_t>(rng.below(hi - lo + 1)); };
  std::ostringstream out;
  std::size_t fresh = 0;
  for (std::size_t s = 0; s < spec.sentences; ++s) {
    Tokens tokens(between(spec.min_tokens, spec.max_tokens));
    for (auto& t : tokens) t = "w" + std::to_string(rng.below(spec.vocabulary));
    out << "S " << detokenize(tokens) << '\n';
    for (std::size_t a = 0; a < spec.annotations; ++a) {
      const std::size_t want = between(spec.min_edits, spec.max_edits);
      std::vector<Edit> edits;
      for (std::size_t attempt = 0; edits.size() < want && attempt < 1000; ++attempt) {
        Edit e;
        const std::size_t width = between(0, 2);
        e.start = between(0, tokens.size() - width);
        e.end = e.start + width;
        const std::size_t produced = width == 0 ? between(1, 2) : between(0, 2);
        for (std::size_t i = 0; i < produced; ++i) e.replacement.push_back("x" + std::to_string(fresh++));
        bool clash = false;
        for (const Edit& other : edits) clash = clash || edits_overlap(e, other);
        if (clash) continue;
        e.etype = nucle_types()[rng.below(nucle_types().size())];
        edits.push_back(std::move(e));
      }
      std::sort(edits.begin(), edits.end(), edit_before);
      for (const Edit& e : edits)
        out << "A " << e.start << ' ' << e.end << "|||" << e.etype << "|||" << detokenize(e.replacement)
            << "|||REQUIRED|||-NONE-|||" << a << '\n';
    }
    out << '\n';
  }
  return out.str();
}

Corpus synthetic_corpus(std::uint64_t seed, const SyntheticSpec& spec) {
  std::istringstream in(synthetic_m2(seed, spec));
  return parse_m2(in);
}

}  // namespace gecval::testing
