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

#include "gecval/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <sstream>

#include "gecval/error.hpp"

namespace gecval {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

std::vector<std::string_view> split_fields(std::string_view text, std::string_view sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = text.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(text.substr(pos));
      return out;
    }
    out.push_back(text.substr(pos, next - pos));
    pos = next + sep.size();
  }
}

std::optional<long long> parse_int(std::string_view text) {
  long long value = 0;
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

struct RawBlock {
  std::size_t line = 0;
  Tokens tokens;
  // annotator id -> edits, in order of first appearance within the block
  std::vector<std::pair<std::string, std::vector<Edit>>> edits;

  std::vector<Edit>& slot(const std::string& annotator) {
    for (auto& [id, list] : edits)
      if (id == annotator) return list;
    edits.emplace_back(annotator, std::vector<Edit>{});
    return edits.back().second;
  }
};

Edit parse_edit_line(std::string_view body, std::size_t line_no, std::size_t n_tokens, bool& noop) {
  const auto fields = split_fields(body, "|||");
  if (fields.size() != 6)
    throw ParseError(line_no, "expected 6 '|||'-separated fields in A line, found " + std::to_string(fields.size()));

  const Tokens span = tokenize(fields[0]);
  if (span.size() != 2) throw ParseError(line_no, "malformed span '" + std::string(fields[0]) + "'");
  const auto start = parse_int(span[0]);
  const auto end = parse_int(span[1]);
  if (!start || !end) throw ParseError(line_no, "non-integer span '" + std::string(fields[0]) + "'");

  Edit edit;
  edit.etype = std::string(fields[1]);
  edit.annotator = std::string(fields[5]);
  noop = (*start == -1 && *end == -1) || edit.etype == "noop";
  if (noop) return edit;

  if (*start < 0 || *end < *start)
    throw ParseError(line_no, "malformed span " + std::to_string(*start) + " " + std::to_string(*end));
  if (static_cast<std::size_t>(*end) > n_tokens)
    throw ParseError(line_no, "span end " + std::to_string(*end) + " exceeds sentence length " +
                                  std::to_string(n_tokens));
  edit.start = static_cast<std::size_t>(*start);
  edit.end = static_cast<std::size_t>(*end);
  if (fields[2] != "-NONE-") edit.replacement = tokenize(fields[2]);
  if (edit.is_insertion() && edit.replacement.empty()) throw ParseError(line_no, "no-op edit (empty span and empty replacement)");
  return edit;
}

// Union-find over edit indices.
std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

Edit merge_group(std::vector<Edit> group, std::span<const std::string> tokens) {
  std::sort(group.begin(), group.end(), edit_before);
  std::size_t lo = group.front().start;
  std::size_t hi = group.front().end;
  std::string etype = group.front().etype;
  for (const Edit& e : group) {
    lo = std::min(lo, e.start);
    hi = std::max(hi, e.end);
    etype = std::min(etype, e.etype);
  }

  Edit merged;
  merged.start = lo;
  merged.end = hi;
  merged.etype = etype;
  merged.annotator = group.front().annotator;
  std::size_t cursor = lo;
  bool inserted_at_cursor = false;
  for (const Edit& e : group) {
    const bool conflicts = e.start < cursor || (e.start == cursor && e.is_insertion() && inserted_at_cursor);
    if (conflicts) continue;  // first writer wins
    merged.replacement.insert(merged.replacement.end(), tokens.begin() + static_cast<std::ptrdiff_t>(cursor),
                              tokens.begin() + static_cast<std::ptrdiff_t>(e.start));
    merged.replacement.insert(merged.replacement.end(), e.replacement.begin(), e.replacement.end());
    cursor = e.end;
    inserted_at_cursor = e.is_insertion();
  }
  merged.replacement.insert(merged.replacement.end(), tokens.begin() + static_cast<std::ptrdiff_t>(cursor),
                            tokens.begin() + static_cast<std::ptrdiff_t>(hi));
  return merged;
}

}  // namespace

Tokens tokenize(std::string_view text) {
  Tokens out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t begin = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > begin) out.emplace_back(text.substr(begin, i - begin));
  }
  return out;
}

std::string detokenize(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

bool edits_overlap(const Edit& a, const Edit& b) noexcept {
  if (a.is_insertion() && b.is_insertion()) return a.start == b.start;
  if (a.is_insertion()) return b.start < a.start && a.start < b.end;
  if (b.is_insertion()) return a.start < b.start && b.start < a.end;
  return a.start < b.end && b.start < a.end;
}

bool edit_before(const Edit& a, const Edit& b) noexcept {
  if (a.start != b.start) return a.start < b.start;
  return a.end < b.end;
}

std::string describe(const Edit& edit) {
  return "(" + std::to_string(edit.start) + "," + std::to_string(edit.end) + ",\"" + detokenize(edit.replacement) +
         "\"," + edit.etype + ")";
}

std::size_t SentenceRecord::annotation_index(std::string_view annotator) const {
  for (std::size_t i = 0; i < annotations.size(); ++i)
    if (annotations[i].annotator == annotator) return i;
  fail(ErrorKind::invalid_argument,
       "sentence " + std::to_string(id) + " has no annotation by '" + std::string(annotator) + "'");
}

std::size_t SentenceRecord::min_edit_count() const noexcept {
  std::size_t best = annotations.empty() ? 0 : annotations.front().edits.size();
  for (const Annotation& a : annotations) best = std::min(best, a.edits.size());
  return best;
}

Annotation resolve_intersections(Annotation annotation, std::span<const std::string> tokens,
                                 IntersectionPolicy policy, std::size_t* merged_groups) {
  auto& edits = annotation.edits;
  std::stable_sort(edits.begin(), edits.end(), edit_before);

  if (policy == IntersectionPolicy::reject) {
    std::string pairs;
    for (std::size_t i = 0; i < edits.size(); ++i)
      for (std::size_t j = i + 1; j < edits.size(); ++j)
        if (edits_overlap(edits[i], edits[j])) pairs += " " + describe(edits[i]) + " x " + describe(edits[j]);
    if (!pairs.empty())
      fail(ErrorKind::data, "annotator '" + annotation.annotator + "' has overlapping edits:" + pairs);
    return annotation;
  }

  // A merged span can in principle touch a neighbouring group, so repeat
  // until the annotation is overlap-free.
  while (true) {
    const std::size_t n = edits.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    bool any = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (edits_overlap(edits[i], edits[j])) {
          parent[find_root(parent, j)] = find_root(parent, i);
          any = true;
        }
    if (!any) return annotation;

    std::vector<std::vector<Edit>> groups(n);
    for (std::size_t i = 0; i < n; ++i) groups[find_root(parent, i)].push_back(edits[i]);
    std::vector<Edit> out;
    for (auto& group : groups) {
      if (group.empty()) continue;
      if (group.size() == 1) {
        out.push_back(std::move(group.front()));
        continue;
      }
      out.push_back(merge_group(std::move(group), tokens));
      if (merged_groups) ++*merged_groups;
    }
    std::stable_sort(out.begin(), out.end(), edit_before);
    edits = std::move(out);
  }
}

Tokens apply_edits(std::span<const std::string> tokens, std::span<const Edit> edits) {
  std::vector<const Edit*> order;
  order.reserve(edits.size());
  for (const Edit& e : edits) {
    if (e.end < e.start || e.end > tokens.size())
      fail(ErrorKind::invalid_argument, "edit " + describe(e) + " out of range for " +
                                            std::to_string(tokens.size()) + " tokens");
    order.push_back(&e);
  }
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j)
      if (edits_overlap(*order[i], *order[j]))
        fail(ErrorKind::invalid_argument, "overlapping edits " + describe(*order[i]) + " and " + describe(*order[j]));
  std::sort(order.begin(), order.end(), [](const Edit* a, const Edit* b) { return edit_before(*a, *b); });

  Tokens out;
  out.reserve(tokens.size() + 4);
  std::size_t cursor = 0;
  for (const Edit* e : order) {
    out.insert(out.end(), tokens.begin() + static_cast<std::ptrdiff_t>(cursor),
               tokens.begin() + static_cast<std::ptrdiff_t>(e->start));
    out.insert(out.end(), e->replacement.begin(), e->replacement.end());
    cursor = e->end;
  }
  out.insert(out.end(), tokens.begin() + static_cast<std::ptrdiff_t>(cursor), tokens.end());
  return out;
}

std::string realize_reference(const SentenceRecord& record, std::size_t annotation) {
  if (annotation >= record.annotations.size())
    fail(ErrorKind::invalid_argument, "sentence " + std::to_string(record.id) + " has no annotation #" +
                                          std::to_string(annotation));
  return detokenize(apply_edits(record.tokens, record.annotations[annotation].edits));
}

std::string realize_reference(const SentenceRecord& record, std::string_view annotator) {
  return realize_reference(record, record.annotation_index(annotator));
}

Corpus parse_m2(std::istream& in, const ParseOptions& options) {
  std::vector<RawBlock> blocks;
  std::vector<std::string> annotators;
  std::optional<RawBlock> current;

  auto close_block = [&] {
    if (current) blocks.push_back(std::move(*current));
    current.reset();
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (tokenize(line).empty()) {
      close_block();
      continue;
    }
    if (line[0] == 'S' && (line.size() == 1 || line[1] == ' ')) {
      if (current) throw ParseError(line_no, "S line inside a block (missing blank separator)");
      current.emplace();
      current->line = line_no;
      current->tokens = tokenize(std::string_view(line).substr(1));
      continue;
    }
    if (line[0] == 'A' && line.size() > 1 && line[1] == ' ') {
      if (!current) throw ParseError(line_no, "A line outside a sentence block");
      bool noop = false;
      Edit edit = parse_edit_line(std::string_view(line).substr(2), line_no, current->tokens.size(), noop);
      if (std::find(annotators.begin(), annotators.end(), edit.annotator) == annotators.end())
        annotators.push_back(edit.annotator);
      auto& slot = current->slot(edit.annotator);
      if (!noop) slot.push_back(std::move(edit));
      continue;
    }
    throw ParseError(line_no, "unexpected line (expected 'S ...', 'A ...' or blank)");
  }
  close_block();

  Corpus corpus;
  corpus.annotators = annotators;
  corpus.stats.blocks = blocks.size();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    RawBlock& block = blocks[b];
    SentenceRecord record;
    record.id = b;
    record.tokens = std::move(block.tokens);
    bool uncorrected = annotators.empty();
    for (const std::string& id : annotators) {
      Annotation annotation;
      annotation.annotator = id;
      for (auto& [owner, list] : block.edits)
        if (owner == id) annotation.edits = std::move(list);
      try {
        annotation = resolve_intersections(std::move(annotation), record.tokens, options.policy,
                                           &corpus.stats.merged_groups);
      } catch (const Error& e) {
        throw ParseError(block.line, "sentence " + std::to_string(b) + ": " + e.what());
      }
      uncorrected = uncorrected || annotation.edits.empty();
      record.annotations.push_back(std::move(annotation));
    }
    if (uncorrected && options.discard_uncorrected) {
      ++corpus.stats.discarded_uncorrected;
      continue;
    }
    for (std::size_t a = 0; a < record.annotations.size(); ++a) record.references.push_back(realize_reference(record, a));
    corpus.records.push_back(std::move(record));
  }
  corpus.stats.kept = corpus.records.size();
  return corpus;
}

Corpus load_m2(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open M2 file '" + path + "'");
  Corpus corpus;
  try {
    corpus = parse_m2(in, options);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.detail());
  }
  corpus.sources.push_back(path);
  return corpus;
}

void attach_references(Corpus& corpus, std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(detokenize(tokenize(line)));
  if (lines.size() != corpus.stats.blocks)
    fail(ErrorKind::data, "reference set has " + std::to_string(lines.size()) + " lines but the M2 file has " +
                              std::to_string(corpus.stats.blocks) + " sentences");
  for (SentenceRecord& record : corpus.records) record.references.push_back(lines[record.id]);
  ++corpus.stats.external_reference_sets;
}

void load_references(Corpus& corpus, const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open reference file '" + path + "'");
  try {
    attach_references(corpus, in);
  } catch (const Error& e) {
    fail(e.kind(), path + ": " + e.what());
  }
  corpus.sources.push_back(path);
}

std::string write_m2(const Corpus& corpus) {
  std::ostringstream out;
  bool first = true;
  for (const SentenceRecord& record : corpus.records) {
    if (!first) out << '\n';
    first = false;
    out << 'S';
    for (const auto& t : record.tokens) out << ' ' << t;
    out << '\n';
    for (const Annotation& annotation : record.annotations) {
      if (annotation.edits.empty()) {
        out << "A -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||" << annotation.annotator << '\n';
        continue;
      }
      for (const Edit& e : annotation.edits)
        out << "A " << e.start << ' ' << e.end << "|||" << e.etype << "|||" << detokenize(e.replacement)
            << "|||REQUIRED|||-NONE-|||" << annotation.annotator << '\n';
    }
  }
  return out.str();
}

}  // namespace gecval
