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

#include "gecval/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "gecval/error.hpp"
#include "gecval/grammar.hpp"

namespace gecval {

namespace {

template <typename Fn>
auto with_context(const std::string& context, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), context + ": " + e.what());
  }
}

MetricConfig metric_config(const ExperimentConfig& config) {
  MetricConfig m = config.metric;
  m.seed = config.seed;
  return m;
}

bool needs_checker(const ExperimentConfig& config) {
  return std::any_of(config.measures.begin(), config.measures.end(), [](const Measure& m) {
    return m.kind == Measure::Kind::metric && m.metric == MetricId::grammaticality;
  });
}

void check_run(const Corpus& corpus, const ExperimentConfig& config, GrammarChecker* checker) {
  config.validate();
  if (corpus.records.empty()) fail(ErrorKind::data, "corpus has no sentences");
  if (needs_checker(config) && !checker)
    fail(ErrorKind::invalid_argument, "grammaticality requested without a grammar checker");
}

double score_text(const Measure& measure, const SentenceRecord& record, std::size_t annotation, EditSet subset,
                  const std::string& candidate, const std::string& source, const ExperimentConfig& config,
                  const MetricConfig& metric, GrammarChecker* checker) {
  switch (measure.kind) {
    case Measure::Kind::oracle: return quality_score(record, annotation, subset);
    case Measure::Kind::anti_oracle: return -quality_score(record, annotation, subset);
    case Measure::Kind::metric: break;
  }
  EvalInput input;
  input.source = source;
  input.candidate = candidate;
  input.stream = record.id;
  if (uses_references(measure.metric)) {
    input.references = scoring_references(record, annotation, config.held_out_refs);
    if (input.references.empty())
      fail(ErrorKind::data, "sentence " + std::to_string(record.id) + " has no reference left to score against");
  }
  return score(measure.metric, input, metric, checker);
}

std::string text_of(const Corpus& corpus, const Correction& c) { return detokenize(realize(corpus, c)); }

std::string context_for(const std::string& stage, const SentenceRecord& record, const Measure& measure) {
  return stage + ", sentence " + std::to_string(record.id) + ", " + measure.name();
}

std::string format_model(double m) {
  std::ostringstream out;
  out << m;
  return out.str();
}

}  // namespace

std::string Measure::name() const {
  switch (kind) {
    case Kind::oracle: return "oracle";
    case Kind::anti_oracle: return "anti_oracle";
    case Kind::metric: break;
  }
  return std::string(metric_name(metric));
}

Measure Measure::parse(std::string_view name) {
  if (name == "oracle") return {Kind::oracle, MetricId::bleu};
  if (name == "anti_oracle") return {Kind::anti_oracle, MetricId::bleu};
  if (auto id = metric_from_name(name)) return of(*id);
  fail(ErrorKind::invalid_argument, "unknown metric '" + std::string(name) + "'");
}

std::string_view to_string(SourceMode mode) noexcept { return mode == SourceMode::sampled ? "sampled" : "original"; }

SourceMode parse_source_mode(std::string_view name) {
  if (name == "sampled") return SourceMode::sampled;
  if (name == "original") return SourceMode::original;
  fail(ErrorKind::invalid_argument, "unknown source mode '" + std::string(name) + "' (sampled|original)");
}

void ExperimentConfig::validate() const {
  if (measures.empty()) fail(ErrorKind::invalid_argument, "metric list is empty");
  for (std::size_t i = 0; i < measures.size(); ++i)
    for (std::size_t j = i + 1; j < measures.size(); ++j)
      if (measures[i] == measures[j]) fail(ErrorKind::invalid_argument, "metric '" + measures[i].name() + "' listed twice");
  if (models.empty()) fail(ErrorKind::invalid_argument, "model list is empty");
  for (double m : models)
    if (!std::isfinite(m) || m < 0) fail(ErrorKind::invalid_argument, "corpus models must be finite and non-negative");
  if (n_ch == 0) fail(ErrorKind::invalid_argument, "n_ch must be at least 1");
  if (repeats == 0) fail(ErrorKind::invalid_argument, "repeats must be at least 1");
  if (permutations == 0) fail(ErrorKind::invalid_argument, "permutations must be at least 1");
  if (workers == 0) fail(ErrorKind::invalid_argument, "workers must be at least 1");
  if (source_modes.empty()) fail(ErrorKind::invalid_argument, "no source mode selected");
  if (source_modes.size() == 2 && source_modes[0] == source_modes[1])
    fail(ErrorKind::invalid_argument, "source mode listed twice");
  if (source_modes.size() > 2) fail(ErrorKind::invalid_argument, "at most two source modes");
  metric.validate();
}

std::vector<std::string> scoring_references(const SentenceRecord& record, std::size_t annotation, bool held_out) {
  std::vector<std::string> refs;
  refs.reserve(record.references.size());
  for (std::size_t i = 0; i < record.references.size(); ++i)
    if (!(held_out && i == annotation && i < record.annotations.size())) refs.push_back(record.references[i]);
  return refs;
}

double score_correction(const Measure& measure, const Corpus& corpus, const Correction& candidate,
                        const std::string& source, const ExperimentConfig& config, GrammarChecker* checker) {
  const SentenceRecord& record = corpus.records.at(candidate.lattice.record);
  const std::string text = measure.kind == Measure::Kind::metric ? text_of(corpus, candidate) : std::string();
  return score_text(measure, record, candidate.lattice.annotation, candidate.subset, text, source, config,
                    metric_config(config), checker);
}

std::vector<Chain> experiment_chains(const Corpus& corpus, const ExperimentConfig& config) {
  static const std::uint64_t kTag = fnv1a("chains");
  std::vector<Chain> chains;
  for (std::size_t r = 0; r < corpus.size(); ++r) {
    const SentenceRecord& record = corpus.records[r];
    for (std::size_t a = 0; a < record.annotations.size(); ++a) {
      Rng rng(derive_seed(config.seed, {record.id, kTag, a}));
      auto sampled = sample_chains(CorrectionLattice::of(corpus, {r, a}), config.n_ch, rng);
      for (Chain& c : sampled) chains.push_back(std::move(c));
    }
  }
  return chains;
}

std::vector<CorpusLevelResult> run_corpus_level(const Corpus& corpus, const ExperimentConfig& config,
                                                GrammarChecker* checker) {
  check_run(corpus, config, checker);
  const MetricConfig metric = metric_config(config);
  const std::size_t n_models = config.models.size();
  const std::size_t n_records = corpus.size();
  const std::size_t n_measures = config.measures.size();
  const std::size_t n_modes = config.source_modes.size();

  // totals[(mode * n_models + model) * n_measures + measure]
  std::vector<double> totals(n_modes * n_models * n_measures, 0.0);
  std::vector<std::string> originals(n_records);
  for (std::size_t r = 0; r < n_records; ++r) originals[r] = detokenize(corpus.records[r].tokens);

  for (std::size_t repeat = 0; repeat < config.repeats; ++repeat) {
    std::vector<std::vector<Correction>> candidates(n_models);
    for (std::size_t m = 0; m < n_models; ++m)
      candidates[m] = sample_model_corpus(corpus, CorpusModel{config.models[m]}, config.seed, repeat);
    std::vector<std::vector<std::string>> sources(n_modes);
    for (std::size_t mi = 0; mi < n_modes; ++mi) {
      if (config.source_modes[mi] == SourceMode::original) {
        sources[mi] = originals;
      } else {
        for (const Correction& c : sample_source_corpus(corpus, config.seed, repeat)) sources[mi].push_back(text_of(corpus, c));
      }
    }

    // scores[((model * n_records + record) * n_modes + mode) * n_measures + measure]
    std::vector<double> scores(n_models * n_records * n_modes * n_measures);
    parallel_for(n_models * n_records, config.workers, [&](std::size_t unit) {
      const std::size_t m = unit / n_records;
      const std::size_t r = unit % n_records;
      const Correction& cand = candidates[m][r];
      const SentenceRecord& record = corpus.records[r];
      const std::string text = text_of(corpus, cand);
      for (std::size_t mi = 0; mi < n_modes; ++mi)
        for (std::size_t k = 0; k < n_measures; ++k) {
          const Measure& measure = config.measures[k];
          scores[(unit * n_modes + mi) * n_measures + k] = with_context(
              context_for("corpus level, model " + format_model(config.models[m]), record, measure),
              [&] {
                return score_text(measure, record, cand.lattice.annotation, cand.subset, text, sources[mi][r], config,
                                  metric, checker);
              });
        }
    });

    for (std::size_t m = 0; m < n_models; ++m)
      for (std::size_t mi = 0; mi < n_modes; ++mi)
        for (std::size_t k = 0; k < n_measures; ++k) {
          double sum = 0.0;
          for (std::size_t r = 0; r < n_records; ++r) sum += scores[(((m * n_records) + r) * n_modes + mi) * n_measures + k];
          totals[(mi * n_models + m) * n_measures + k] += sum / static_cast<double>(n_records);
        }
  }

  std::vector<CorpusLevelResult> out;
  for (std::size_t k = 0; k < n_measures; ++k)
    for (std::size_t mi = 0; mi < n_modes; ++mi) {
      CorpusLevelResult res;
      res.measure = config.measures[k];
      res.mode = config.source_modes[mi];
      for (std::size_t m = 0; m < n_models; ++m)
        res.scores.push_back(totals[(mi * n_models + m) * n_measures + k] / static_cast<double>(config.repeats));
      try {
        res.rho = spearman(config.models, res.scores);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::invalid_argument) throw;
        res.note = e.what();
      }
      out.push_back(std::move(res));
    }
  return out;
}

ExperimentResult run_chain_analyses(const Corpus& corpus, const ExperimentConfig& config, GrammarChecker* checker) {
  check_run(corpus, config, checker);
  const MetricConfig metric = metric_config(config);
  const std::size_t n_measures = config.measures.size();
  const std::size_t n_modes = config.source_modes.size();

  ExperimentResult result;
  result.config = config;
  const std::vector<Chain> chains = experiment_chains(corpus, config);
  result.chains = chains.size();

  // scores[(chain * n_modes + mode) * n_measures + measure][node]
  std::vector<std::vector<double>> scores(chains.size() * n_modes * n_measures);
  parallel_for(chains.size(), config.workers, [&](std::size_t c) {
    const Chain& chain = chains[c];
    const SentenceRecord& record = corpus.records[chain.lattice.record];
    const std::size_t a = chain.lattice.annotation;
    std::vector<std::string> texts;
    for (EditSet node : chain.nodes) texts.push_back(text_of(corpus, {chain.lattice, node}));
    for (std::size_t mi = 0; mi < n_modes; ++mi) {
      const std::string& source = config.source_modes[mi] == SourceMode::sampled ? texts[chain.source] : texts.front();
      for (std::size_t k = 0; k < n_measures; ++k) {
        const Measure& measure = config.measures[k];
        auto& out = scores[(c * n_modes + mi) * n_measures + k];
        out.resize(chain.nodes.size());
        for (std::size_t i = 0; i < chain.nodes.size(); ++i)
          out[i] = with_context(context_for("sentence level", record, measure), [&] {
            return score_text(measure, record, a, chain.nodes[i], texts[i], source, config, metric, checker);
          });
      }
    }
  });
  auto node_scores = [&](std::size_t c, std::size_t mi, std::size_t k) -> const std::vector<double>& {
    return scores[(c * n_modes + mi) * n_measures + k];
  };

  std::vector<NodeGroup> groups;
  groups.reserve(chains.size());
  for (const Chain& chain : chains) groups.push_back({chain.lattice, chain.nodes});

  if (config.analyses.sentence_level) {
    std::vector<double> quality;
    for (const Chain& chain : chains) {
      const SentenceRecord& record = corpus.records[chain.lattice.record];
      for (EditSet node : chain.nodes) quality.push_back(quality_score(record, chain.lattice.annotation, node));
    }
    const auto pairs = comparable_pairs(groups);
    result.comparable_pairs = pairs.size();
    PermutationOptions perm{config.permutations, derive_seed(config.seed, {fnv1a("sentence-level")}), config.workers};
    for (std::size_t k = 0; k < n_measures; ++k)
      for (std::size_t mi = 0; mi < n_modes; ++mi) {
        SentenceLevelResult res;
        res.measure = config.measures[k];
        res.mode = config.source_modes[mi];
        std::vector<double> ys;
        for (std::size_t c = 0; c < chains.size(); ++c) {
          const auto& s = node_scores(c, mi, k);
          ys.insert(ys.end(), s.begin(), s.end());
        }
        res.nodes = ys.size();
        try {
          res.r = pearson(quality, ys);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::invalid_argument) throw;
          res.note = std::string("pearson: ") + e.what();
        }
        std::vector<PairJudgment> judgments;
        judgments.reserve(pairs.size());
        double diff = 0.0;
        for (const ComparablePair& pair : pairs) {
          // chain nodes are ordered by size, one edit per step
          const auto& s = node_scores(pair.group, mi, k);
          const PairJudgment j{s[pair.lower.size()], s[pair.higher.size()]};
          diff += j.higher - j.lower;
          judgments.push_back(j);
        }
        if (judgments.empty()) {
          res.note += std::string(res.note.empty() ? "" : "; ") + "kendall: no comparable pairs";
        } else {
          res.tau = kendall_tau_partial(judgments, perm);
          res.mean_pair_difference = diff / static_cast<double>(judgments.size());
        }
        result.sentence_level.push_back(std::move(res));
      }
  }

  if (config.analyses.type_sensitivity) {
    std::set<std::string> types;
    for (const SentenceRecord& record : corpus.records)
      for (const Annotation& annotation : record.annotations)
        for (const Edit& e : annotation.edits) types.insert(e.etype);
    result.edit_types.assign(types.begin(), types.end());
    const auto pairs = single_edit_pairs(groups);
    result.single_edit_pairs = pairs.size();
    for (std::size_t k = 0; k < n_measures; ++k)
      for (std::size_t mi = 0; mi < n_modes; ++mi) {
        std::map<std::string, std::pair<double, std::size_t>> acc;
        for (const SingleEditPair& pair : pairs) {
          const auto& record = corpus.records[pair.lattice.record];
          const std::string& etype = record.annotations[pair.lattice.annotation].edits[pair.edit].etype;
          const auto& s = node_scores(pair.group, mi, k);
          auto& cell = acc[etype];
          cell.first += s[pair.higher.size()] - s[pair.lower.size()];
          ++cell.second;
        }
        for (const std::string& etype : result.edit_types) {
          TypeCell cell{config.measures[k], config.source_modes[mi], etype, 0, std::nullopt};
          if (auto it = acc.find(etype); it != acc.end()) {
            cell.pairs = it->second.second;
            cell.delta = it->second.first / static_cast<double>(it->second.second);
          }
          result.type_sensitivity.push_back(std::move(cell));
        }
      }
  }

  if (config.analyses.error_buckets) {
    for (std::size_t k = 0; k < n_measures; ++k)
      for (std::size_t mi = 0; mi < n_modes; ++mi) {
        struct Acc {
          double sum = 0.0;
          std::size_t n = 0;
          std::set<std::size_t> sentences;
        };
        std::map<std::size_t, Acc> buckets;
        for (std::size_t c = 0; c < chains.size(); ++c) {
          const SentenceRecord& record = corpus.records[chains[c].lattice.record];
          Acc& b = buckets[record.min_edit_count()];
          b.sum += node_scores(c, mi, k).front();
          ++b.n;
          b.sentences.insert(record.id);
        }
        for (const auto& [errors, b] : buckets) {
          if (b.sentences.size() < config.min_bucket) continue;
          result.error_buckets.push_back(
              {config.measures[k], config.source_modes[mi], errors, b.sentences.size(), b.sum / static_cast<double>(b.n)});
        }
      }
  }
  return result;
}

ExperimentResult run_experiment(const Corpus& corpus, const ExperimentConfig& config, GrammarChecker* checker) {
  check_run(corpus, config, checker);
  ExperimentResult result;
  const AnalysisSelection& sel = config.analyses;
  if (sel.sentence_level || sel.type_sensitivity || sel.error_buckets) result = run_chain_analyses(corpus, config, checker);
  result.config = config;
  if (sel.corpus_level) result.corpus_level = run_corpus_level(corpus, config, checker);
  return result;
}

std::string dump_samples(const Corpus& corpus, const ExperimentConfig& config) {
  config.validate();
  std::ostringstream out;
  char mask[32];
  auto row = [&](std::string_view kind, const std::string& model, std::size_t repeat, const std::string& chain,
                 const std::string& position, const Correction& c) {
    std::snprintf(mask, sizeof mask, "%llx", static_cast<unsigned long long>(c.subset.bits()));
    out << kind << '\t' << model << '\t' << repeat << '\t' << chain << '\t' << position << '\t'
        << corpus.records[c.lattice.record].id << '\t' << c.lattice.annotation << '\t' << mask << '\t'
        << text_of(corpus, c) << '\n';
  };
  out << "# seed " << config.seed << '\n';
  out << "kind\tmodel\trepeat\tchain\tposition\tsentence\tannotation\tmask\ttext\n";
  for (std::size_t repeat = 0; repeat < config.repeats; ++repeat) {
    for (double m : config.models)
      for (const Correction& c : sample_model_corpus(corpus, CorpusModel{m}, config.seed, repeat))
        row("model", format_model(m), repeat, "-", "-", c);
    for (const Correction& c : sample_source_corpus(corpus, config.seed, repeat)) row("source", "-", repeat, "-", "-", c);
  }
  const auto chains = experiment_chains(corpus, config);
  for (std::size_t c = 0; c < chains.size(); ++c) {
    const Chain& chain = chains[c];
    for (std::size_t i = 0; i < chain.nodes.size(); ++i)
      row("chain", "-", 0, std::to_string(c), std::to_string(i), {chain.lattice, chain.nodes[i]});
    row("chain_source", "-", 0, std::to_string(c), std::to_string(chain.source), {chain.lattice, chain.nodes[chain.source]});
  }
  return out.str();
}

}  // namespace gecval
