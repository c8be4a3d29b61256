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
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gecval {

using Tokens = std::vector<std::string>;

/// Splits on runs of ASCII whitespace.
Tokens tokenize(std::string_view text);
/// Single-space join.
std::string detokenize(std::span<const std::string> tokens);

/// A typed replacement of the token span [start, end).
struct Edit {
  std::size_t start = 0;
  std::size_t end = 0;
  Tokens replacement;
  std::string etype;
  std::string annotator;

  bool is_insertion() const noexcept { return start == end; }
  bool operator==(const Edit&) const = default;
};

/// Span overlap in the sense used for annotations: non-empty spans overlap
/// when their interiors intersect, an insertion overlaps a span that strictly
/// contains its position, and two insertions overlap at the same position.
bool edits_overlap(const Edit& a, const Edit& b) noexcept;

/// Orders edits left to right; an insertion sorts before a span starting at
/// the same position.
bool edit_before(const Edit& a, const Edit& b) noexcept;

std::string describe(const Edit& edit);

struct Annotation {
  std::string annotator;
  std::vector<Edit> edits;  // sorted with edit_before, pairwise non-overlapping

  bool operator==(const Annotation&) const = default;
};

struct SentenceRecord {
  std::size_t id = 0;  // 0-based block index in the source file
  Tokens tokens;
  std::vector<Annotation> annotations;
  /// Perfect corrections realized from each annotation (same order as
  /// `annotations`), followed by externally supplied references.
  std::vector<std::string> references;

  std::size_t annotation_index(std::string_view annotator) const;
  std::size_t min_edit_count() const noexcept;
};

struct LoadStats {
  std::size_t blocks = 0;
  std::size_t kept = 0;
  std::size_t discarded_uncorrected = 0;
  std::size_t merged_groups = 0;
  std::size_t external_reference_sets = 0;
};

struct Corpus {
  std::vector<SentenceRecord> records;
  std::vector<std::string> annotators;  // corpus-wide ids, first-appearance order
  std::vector<std::string> sources;     // provenance: file paths that fed this corpus
  LoadStats stats;

  std::size_t size() const noexcept { return records.size(); }
};

enum class IntersectionPolicy { merge, reject };

struct ParseOptions {
  IntersectionPolicy policy = IntersectionPolicy::merge;
  /// Drop sentences that some annotator left uncorrected.
  bool discard_uncorrected = true;
};

/// Reads M2 text: blank-line separated blocks of one `S` line followed by
/// `A start end|||type|||replacement|||required|||comment|||annotator` lines.
/// Throws ParseError with the offending line number.
Corpus parse_m2(std::istream& in, const ParseOptions& options = {});
Corpus load_m2(const std::string& path, const ParseOptions& options = {});

/// Appends one reference per line; line i belongs to block i of the M2 file.
void attach_references(Corpus& corpus, std::istream& in);
void load_references(Corpus& corpus, const std::string& path);

/// Serializes back to M2. Empty annotations are written as noop lines.
std::string write_m2(const Corpus& corpus);

/// Merges (or rejects) overlapping edits. Under `merge`, each connected group
/// of overlapping edits becomes one edit over the union span; its replacement
/// applies the group left to right, first writer wins on conflicting tokens,
/// and its type is the group's lexicographically smallest type.
Annotation resolve_intersections(Annotation annotation, std::span<const std::string> tokens,
                                 IntersectionPolicy policy, std::size_t* merged_groups = nullptr);

/// Replaces every edit's span. Edits must be pairwise non-overlapping and in
/// range; the result does not depend on their order in `edits`.
Tokens apply_edits(std::span<const std::string> tokens, std::span<const Edit> edits);

/// The perfect correction of one annotation, single-space joined.
std::string realize_reference(const SentenceRecord& record, std::string_view annotator);
std::string realize_reference(const SentenceRecord& record, std::size_t annotation);

}  // namespace gecval
