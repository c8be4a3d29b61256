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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gecval {

class GrammarChecker;

enum class MetricId { bleu, gleu, ibleu, sari, max_sari, f_half, min_ld_to_refs, ld_to_source, grammaticality };

std::string_view metric_name(MetricId id) noexcept;
std::optional<MetricId> metric_from_name(std::string_view name) noexcept;
std::span<const MetricId> all_metrics() noexcept;
bool uses_references(MetricId id) noexcept;

struct MetricConfig {
  std::size_t ngram_order = 4;
  int bleu_smoothing = 3;  // only NLTK's method 3 is implemented
  double ibleu_alpha = 0.8;
  std::size_t gleu_iterations = 500;
  std::uint64_t seed = 0;  // root of GLEU's per-sentence reference sampling

  void validate() const;
};

struct EvalInput {
  std::string source;
  std::string candidate;
  std::vector<std::string> references;
  std::uint64_t stream = 0;  // sentence id; selects GLEU's reference sampling stream
};

/// Sentence BLEU as computed by NLTK's sentence_bleu with uniform weights and
/// smoothing method 3: the k-th zero n-gram precision becomes
/// 1 / (2^k * candidate n-gram count). Returns 0 when no unigram matches.
double bleu(std::string_view candidate, std::span<const std::string> references, const MetricConfig& config = {});

/// GLEU with per-round reference sampling. Each round scores the candidate
/// against one uniformly drawn reference; the result is the mean over rounds.
double gleu(std::string_view source, std::string_view candidate, std::span<const std::string> references,
            const MetricConfig& config = {}, std::uint64_t stream = 0);

/// GLEU against a single reference (one round).
double gleu_single(std::string_view source, std::string_view candidate, std::string_view reference,
                   std::size_t order = 4);

/// alpha * BLEU(O, R) - (1 - alpha) * BLEU(O, S)
double ibleu(std::string_view source, std::string_view candidate, std::span<const std::string> references,
             const MetricConfig& config = {});

/// Precision-weighted F0.5 over automatically extracted edits, maximized over
/// references. Edits match on (start, end, lowercased replacement).
double f_half(std::string_view source, std::string_view candidate, std::span<const std::string> references);

struct EditCounts {
  std::size_t system = 0;
  std::size_t gold = 0;
  std::size_t matched = 0;
};
/// F0.5 from edit counts: 0/0 edits scores 1, exactly one empty side scores 0.
double f_half_from_counts(const EditCounts& counts);

/// SARI with reference n-gram counts averaged over references.
double sari(std::string_view source, std::string_view candidate, std::span<const std::string> references,
            std::size_t order = 4);
double max_sari(std::string_view source, std::string_view candidate, std::span<const std::string> references,
                std::size_t order = 4);

/// Similarity to the closest reference, normalized by the reference length.
double min_ld_to_refs(std::string_view candidate, std::span<const std::string> references);
/// Similarity of the source to the candidate, normalized by the candidate length.
double ld_to_source(std::string_view source, std::string_view candidate);

/// 1 - errors / tokens, floored at 0; an empty sentence with no errors scores 1.
double grammaticality_from_count(std::size_t errors, std::size_t tokens) noexcept;
double grammaticality(std::string_view candidate, GrammarChecker& checker);

/// Dispatches to the metric. `checker` is required for grammaticality only.
double score(MetricId id, const EvalInput& input, const MetricConfig& config = {}, GrammarChecker* checker = nullptr);

/// Mean sentence score.
double corpus_score(MetricId id, std::span<const EvalInput> inputs, const MetricConfig& config = {},
                    GrammarChecker* checker = nullptr);

}  // namespace gecval
