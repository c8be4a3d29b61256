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

#include <string>
#include <string_view>

#include "gecval/analysis.hpp"
#include "gecval/corpus.hpp"

namespace gecval {

enum class ReportFormat { tsv, json };
ReportFormat parse_report_format(std::string_view name);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::string& path);

/// Digest of the loaded corpus content (M2 rendering plus references).
std::string corpus_digest(const Corpus& corpus);

/// Corpus statistics as JSON (what `ingest` prints).
std::string corpus_summary_json(const Corpus& corpus);

/// Experiment configuration from a JSON object. Unknown keys are rejected;
/// missing keys keep their defaults. Recognized keys: seed, metrics, models,
/// n_ch, source_modes, repeats, held_out_refs, permutations, workers,
/// gleu_iterations, ibleu_alpha, ngram_order, min_bucket, analyses
/// (object with corpus_level, sentence_level, type_sensitivity, error_buckets).
ExperimentConfig config_from_json(std::string_view text);

/// Every result with full double precision. Contains nothing that depends on
/// the worker count, the clock or the host.
std::string report_json(const ExperimentResult& result);

/// Seed, configuration, conventions, corpus and input digests, checker and
/// software version.
std::string manifest_json(const ExperimentResult& result, const Corpus& corpus, const std::string& checker);

/// Writes manifest.json plus either report.json or the TSV tables
/// (correlations.tsv, corpus_scores.tsv, type_sensitivity.tsv,
/// error_buckets.tsv) into `out_dir`, creating it if needed.
void write_report(const ExperimentResult& result, const Corpus& corpus, const std::string& checker,
                  const std::string& out_dir, ReportFormat format);

}  // namespace gecval
