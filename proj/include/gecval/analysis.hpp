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
#include <string>
#include <string_view>
#include <vector>

#include "gecval/corpus.hpp"
#include "gecval/lattice.hpp"
#include "gecval/metrics.hpp"
#include "gecval/stats.hpp"

namespace gecval {

class GrammarChecker;

/// Something that scores a correction: one of the metrics, the linear
/// quality score itself ("oracle"), or its negation ("anti_oracle"). The
/// oracles read the lattice position of the candidate instead of its text.
struct Measure {
  enum class Kind { metric, oracle, anti_oracle };
  Kind kind = Kind::metric;
  MetricId metric = MetricId::bleu;

  std::string name() const;
  static Measure parse(std::string_view name);  // throws invalid_argument
  static Measure of(MetricId id) { return {Kind::metric, id}; }
  bool operator==(const Measure&) const = default;
};

enum class SourceMode { sampled, original };
std::string_view to_string(SourceMode mode) noexcept;
SourceMode parse_source_mode(std::string_view name);

struct AnalysisSelection {
  bool corpus_level = true;
  bool sentence_level = true;
  bool type_sensitivity = true;
  bool error_buckets = true;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::vector<Measure> measures;
  std::vector<double> models = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::size_t n_ch = 1;
  std::vector<SourceMode> source_modes = {SourceMode::sampled};
  std::size_t repeats = 1;        // model corpora sampled per model, scores averaged
  bool held_out_refs = false;     // drop the lattice's own annotation from the references
  std::size_t permutations = 10000;
  std::size_t workers = 1;        // never affects results
  MetricConfig metric;            // metric.seed is overwritten with `seed`
  AnalysisSelection analyses;
  std::size_t min_bucket = 3;     // smallest reported error-count bucket, in sentences

  void validate() const;
};

struct CorpusLevelResult {
  Measure measure;
  SourceMode mode = SourceMode::sampled;
  std::vector<double> scores;  // per model, same order as config.models
  std::optional<CorrelationReport> rho;
  std::string note;  // why rho is missing
};

struct SentenceLevelResult {
  Measure measure;
  SourceMode mode = SourceMode::sampled;
  std::optional<CorrelationReport> r;
  std::optional<CorrelationReport> tau;
  std::size_t nodes = 0;
  double mean_pair_difference = 0.0;  // mean of m(higher) - m(lower) over comparable pairs
  std::string note;
};

struct TypeCell {
  Measure measure;
  SourceMode mode = SourceMode::sampled;
  std::string etype;
  std::size_t pairs = 0;
  std::optional<double> delta;  // absent when no pair of this type was sampled
};

struct ErrorBucket {
  Measure measure;
  SourceMode mode = SourceMode::sampled;
  std::size_t errors = 0;     // fewest edits any annotation needs
  std::size_t sentences = 0;
  double mean_original_score = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<CorpusLevelResult> corpus_level;
  std::vector<SentenceLevelResult> sentence_level;
  std::vector<std::string> edit_types;  // every type in the corpus, sorted
  std::vector<TypeCell> type_sensitivity;
  std::vector<ErrorBucket> error_buckets;
  std::size_t chains = 0;
  std::size_t comparable_pairs = 0;
  std::size_t single_edit_pairs = 0;
};

/// References a candidate of the given lattice is scored against.
std::vector<std::string> scoring_references(const SentenceRecord& record, std::size_t annotation, bool held_out);

/// Scores one correction. `source` is the text the metric treats as input.
double score_correction(const Measure& measure, const Corpus& corpus, const Correction& candidate,
                        const std::string& source, const ExperimentConfig& config, GrammarChecker* checker);

/// The chains every sentence-level analysis uses: for each sentence and each
/// of its annotations, n_ch chains drawn from a stream keyed by sentence id
/// and annotation, independent of source mode.
std::vector<Chain> experiment_chains(const Corpus& corpus, const ExperimentConfig& config);

std::vector<CorpusLevelResult> run_corpus_level(const Corpus& corpus, const ExperimentConfig& config,
                                                GrammarChecker* checker = nullptr);

/// Sentence-level correlations, type sensitivity and error buckets, as
/// selected in config.analyses, over one shared set of chains.
ExperimentResult run_chain_analyses(const Corpus& corpus, const ExperimentConfig& config,
                                    GrammarChecker* checker = nullptr);

/// Everything config.analyses selects.
ExperimentResult run_experiment(const Corpus& corpus, const ExperimentConfig& config,
                                GrammarChecker* checker = nullptr);

/// Tab-separated listing of every sampled correction (model corpora, source
/// corpora and chains) with its edit mask and text.
std::string dump_samples(const Corpus& corpus, const ExperimentConfig& config);

}  // namespace gecval
