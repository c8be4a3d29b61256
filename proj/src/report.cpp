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

#include "gecval/report.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>
#include <type_traits>

#include "gecval/error.hpp"

namespace gecval {

using Json = nlohmann::ordered_json;

namespace {

Json correlation_json(const std::optional<CorrelationReport>& r) {
  if (!r) return nullptr;
  Json j{{"coefficient", r->coefficient}, {"p_value", r->p_value}, {"n", r->n}, {"method", r->method}};
  if (r->kind == CoefficientKind::kendall_tau) {
    j["discongruent"] = r->discongruent;
    j["ties"] = r->ties;
  }
  return j;
}

Json config_json(const ExperimentConfig& c) {
  Json measures = Json::array();
  for (const Measure& m : c.measures) measures.push_back(m.name());
  Json modes = Json::array();
  for (SourceMode m : c.source_modes) modes.push_back(std::string(to_string(m)));
  // workers is left out on purpose: it never changes a result
  return Json{{"seed", c.seed},
              {"metrics", measures},
              {"models", c.models},
              {"n_ch", c.n_ch},
              {"source_modes", modes},
              {"repeats", c.repeats},
              {"held_out_refs", c.held_out_refs},
              {"permutations", c.permutations},
              {"ngram_order", c.metric.ngram_order},
              {"bleu_smoothing", c.metric.bleu_smoothing},
              {"ibleu_alpha", c.metric.ibleu_alpha},
              {"gleu_iterations", c.metric.gleu_iterations},
              {"min_bucket", c.min_bucket},
              {"analyses",
               {{"corpus_level", c.analyses.corpus_level},
                {"sentence_level", c.analyses.sentence_level},
                {"type_sensitivity", c.analyses.type_sensitivity},
                {"error_buckets", c.analyses.error_buckets}}}};
}

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s(buf);
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string fixed3(const std::optional<double>& v) { return v ? fixed3(*v) : "NA"; }

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write " + path.string());
  out << content;
  out.close();
  if (!out) fail(ErrorKind::io, "failed writing " + path.string());
}

std::string format_model(double m) {
  std::ostringstream out;
  out << m;
  return out.str();
}

template <typename T>
const T* find_result(const std::vector<T>& rows, const Measure& measure, SourceMode mode) {
  for (const T& row : rows)
    if (row.measure == measure && row.mode == mode) return &row;
  return nullptr;
}

std::string correlations_tsv(const ExperimentResult& result) {
  const ExperimentConfig& c = result.config;
  std::ostringstream out;
  out << "metric";
  for (SourceMode mode : c.source_modes) {
    const std::string s(to_string(mode));
    for (const char* col : {"rho", "rho_p", "r", "r_p", "tau", "tau_p", "pairs"}) out << '\t' << col << '_' << s;
  }
  out << '\n';
  auto coef = [](const std::optional<CorrelationReport>& r) {
    return r ? std::make_pair(fixed3(r->coefficient), fixed3(r->p_value)) : std::make_pair(std::string("NA"), std::string("NA"));
  };
  for (const Measure& m : c.measures) {
    out << m.name();
    for (SourceMode mode : c.source_modes) {
      const auto* corpus = find_result(result.corpus_level, m, mode);
      const auto* sentence = find_result(result.sentence_level, m, mode);
      const auto rho = coef(corpus ? corpus->rho : std::nullopt);
      const auto r = coef(sentence ? sentence->r : std::nullopt);
      const auto tau = coef(sentence ? sentence->tau : std::nullopt);
      out << '\t' << rho.first << '\t' << rho.second << '\t' << r.first << '\t' << r.second << '\t' << tau.first << '\t'
          << tau.second << '\t' << (sentence && sentence->tau ? std::to_string(sentence->tau->n) : "NA");
    }
    out << '\n';
  }
  return out.str();
}

std::string corpus_scores_tsv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "metric\tsource_mode";
  for (double m : result.config.models) out << "\tM=" << format_model(m);
  out << '\n';
  for (const CorpusLevelResult& row : result.corpus_level) {
    out << row.measure.name() << '\t' << to_string(row.mode);
    for (double s : row.scores) out << '\t' << fixed3(s);
    out << '\n';
  }
  return out.str();
}

std::string type_sensitivity_tsv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "metric\tsource_mode";
  for (const std::string& t : result.edit_types) out << '\t' << t;
  out << '\n';
  std::map<std::string, std::size_t> pairs;
  for (const TypeCell& cell : result.type_sensitivity) pairs[cell.etype] = cell.pairs;
  out << "pairs\t-";
  for (const std::string& t : result.edit_types) out << '\t' << pairs[t];
  out << '\n';
  for (const Measure& m : result.config.measures)
    for (SourceMode mode : result.config.source_modes) {
      out << m.name() << '\t' << to_string(mode);
      for (const std::string& t : result.edit_types) {
        std::optional<double> delta;
        for (const TypeCell& cell : result.type_sensitivity)
          if (cell.measure == m && cell.mode == mode && cell.etype == t) delta = cell.delta;
        out << '\t' << fixed3(delta);
      }
      out << '\n';
    }
  return out.str();
}

std::string error_buckets_tsv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "metric\tsource_mode\terrors\tsentences\tmean_original_score\n";
  for (const ErrorBucket& b : result.error_buckets)
    out << b.measure.name() << '\t' << to_string(b.mode) << '\t' << b.errors << '\t' << b.sentences << '\t'
        << fixed3(b.mean_original_score) << '\n';
  return out.str();
}

template <typename T>
T get_as(const Json& j, const char* key) {
  // the json library would wrap a negative number into a huge count
  if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>)
    if (!j.is_number_unsigned()) fail(ErrorKind::invalid_argument, std::string("config: '") + key + "' must be a non-negative integer");
  try {
    return j.get<T>();
  } catch (const Json::exception&) {
    fail(ErrorKind::invalid_argument, std::string("config: bad value for '") + key + "'");
  }
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "tsv") return ReportFormat::tsv;
  if (name == "json") return ReportFormat::json;
  fail(ErrorKind::invalid_argument, "unknown report format '" + std::string(name) + "' (tsv|json)");
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    fail(ErrorKind::io, "SHA-256 computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

std::string corpus_digest(const Corpus& corpus) {
  std::string content = write_m2(corpus);
  for (const SentenceRecord& record : corpus.records)
    for (const std::string& ref : record.references) (content += ref) += '\n';
  return sha256_hex(content);
}

std::string corpus_summary_json(const Corpus& corpus) {
  std::size_t annotations = 0, edits = 0, tokens = 0;
  std::map<std::string, std::size_t> types;
  for (const SentenceRecord& record : corpus.records) {
    annotations += record.annotations.size();
    tokens += record.tokens.size();
    for (const Annotation& a : record.annotations)
      for (const Edit& e : a.edits) {
        ++edits;
        ++types[e.etype];
      }
  }
  Json type_counts = Json::object();
  for (const auto& [t, n] : types) type_counts[t] = n;
  const LoadStats& s = corpus.stats;
  Json j{{"sentences", corpus.size()},
         {"blocks", s.blocks},
         {"discarded_uncorrected", s.discarded_uncorrected},
         {"merged_overlap_groups", s.merged_groups},
         {"external_reference_sets", s.external_reference_sets},
         {"annotators", corpus.annotators},
         {"annotations", annotations},
         {"edits", edits},
         {"tokens", tokens},
         {"edit_types", type_counts},
         {"sources", corpus.sources}};
  return j.dump(2);
}

ExperimentConfig config_from_json(std::string_view text) {
  const Json doc = Json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) fail(ErrorKind::invalid_argument, "config: not a JSON object");
  ExperimentConfig c;
  for (const auto& [key, value] : doc.items()) {
    if (key == "seed") c.seed = get_as<std::uint64_t>(value, "seed");
    else if (key == "metrics") {
      c.measures.clear();
      for (const auto& name : get_as<std::vector<std::string>>(value, "metrics")) c.measures.push_back(Measure::parse(name));
    } else if (key == "models") c.models = get_as<std::vector<double>>(value, "models");
    else if (key == "n_ch") c.n_ch = get_as<std::size_t>(value, "n_ch");
    else if (key == "source_modes") {
      c.source_modes.clear();
      for (const auto& name : get_as<std::vector<std::string>>(value, "source_modes"))
        c.source_modes.push_back(parse_source_mode(name));
    } else if (key == "repeats") c.repeats = get_as<std::size_t>(value, "repeats");
    else if (key == "held_out_refs") c.held_out_refs = get_as<bool>(value, "held_out_refs");
    else if (key == "permutations") c.permutations = get_as<std::size_t>(value, "permutations");
    else if (key == "workers") c.workers = get_as<std::size_t>(value, "workers");
    else if (key == "gleu_iterations") c.metric.gleu_iterations = get_as<std::size_t>(value, "gleu_iterations");
    else if (key == "ibleu_alpha") c.metric.ibleu_alpha = get_as<double>(value, "ibleu_alpha");
    else if (key == "ngram_order") c.metric.ngram_order = get_as<std::size_t>(value, "ngram_order");
    else if (key == "min_bucket") c.min_bucket = get_as<std::size_t>(value, "min_bucket");
    else if (key == "analyses") {
      if (!value.is_object()) fail(ErrorKind::invalid_argument, "config: 'analyses' must be an object");
      for (const auto& [name, flag] : value.items()) {
        bool* target = name == "corpus_level"       ? &c.analyses.corpus_level
                       : name == "sentence_level"   ? &c.analyses.sentence_level
                       : name == "type_sensitivity" ? &c.analyses.type_sensitivity
                       : name == "error_buckets"    ? &c.analyses.error_buckets
                                                    : nullptr;
        if (!target) fail(ErrorKind::invalid_argument, "config: unknown analysis '" + name + "'");
        *target = get_as<bool>(flag, name.c_str());
      }
    } else {
      fail(ErrorKind::invalid_argument, "config: unknown key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

std::string report_json(const ExperimentResult& result) {
  Json corpus = Json::array();
  for (const CorpusLevelResult& row : result.corpus_level) {
    Json j{{"metric", row.measure.name()},
           {"source_mode", std::string(to_string(row.mode))},
           {"models", result.config.models},
           {"scores", row.scores},
           {"spearman", correlation_json(row.rho)}};
    if (!row.note.empty()) j["note"] = row.note;
    corpus.push_back(std::move(j));
  }
  Json sentence = Json::array();
  for (const SentenceLevelResult& row : result.sentence_level) {
    Json j{{"metric", row.measure.name()},
           {"source_mode", std::string(to_string(row.mode))},
           {"nodes", row.nodes},
           {"pearson", correlation_json(row.r)},
           {"kendall", correlation_json(row.tau)},
           {"mean_pair_difference", row.tau ? Json(row.mean_pair_difference) : Json(nullptr)}};
    if (!row.note.empty()) j["note"] = row.note;
    sentence.push_back(std::move(j));
  }
  Json cells = Json::array();
  for (const TypeCell& cell : result.type_sensitivity)
    cells.push_back({{"metric", cell.measure.name()},
                     {"source_mode", std::string(to_string(cell.mode))},
                     {"type", cell.etype},
                     {"pairs", cell.pairs},
                     {"delta", cell.delta ? Json(*cell.delta) : Json(nullptr)}});
  Json buckets = Json::array();
  for (const ErrorBucket& b : result.error_buckets)
    buckets.push_back({{"metric", b.measure.name()},
                       {"source_mode", std::string(to_string(b.mode))},
                       {"errors", b.errors},
                       {"sentences", b.sentences},
                       {"mean_original_score", b.mean_original_score}});
  Json j{{"seed", result.config.seed},
         {"counts",
          {{"chains", result.chains},
           {"comparable_pairs", result.comparable_pairs},
           {"single_edit_pairs", result.single_edit_pairs}}},
         {"corpus_level", corpus},
         {"sentence_level", sentence},
         {"type_sensitivity", {{"types", result.edit_types}, {"cells", cells}}},
         {"error_buckets", buckets}};
  return j.dump(2) + "\n";
}

std::string manifest_json(const ExperimentResult& result, const Corpus& corpus, const std::string& checker) {
  Json inputs = Json::array();
  for (const std::string& path : corpus.sources) inputs.push_back({{"path", path}, {"sha256", sha256_file(path)}});
  Json j{{"software", {{"name", "gecval"}, {"version", GECVAL_VERSION}}},
         {"seed", result.config.seed},
         {"config", config_json(result.config)},
         {"conventions",
          {{"kendall_ties", "a metric tie on a comparable pair counts as half a discongruent pair"},
           {"kendall_significance", "two-sided sign-flip permutation test, p = (1 + extreme) / (1 + permutations)"},
           {"spearman_significance", "exact permutation for n <= 10, Student t approximation above"},
           {"pearson_significance", "Student t, n - 2 degrees of freedom"},
           {"chain_source", "each chain draws one source node uniformly; all of its pairs use that source"},
           {"original_mode_source", "the uncorrected sentence"},
           {"corpus_score", "mean sentence score, averaged over repeats"},
           {"error_bucket_key", "fewest edits any annotation of the sentence makes"},
           {"grammaticality", "1 - errors / tokens, floored at 0"}}},
         {"corpus",
          {{"sha256", corpus_digest(corpus)},
           {"sentences", corpus.size()},
           {"blocks", corpus.stats.blocks},
           {"discarded_uncorrected", corpus.stats.discarded_uncorrected},
           {"merged_overlap_groups", corpus.stats.merged_groups},
           {"external_reference_sets", corpus.stats.external_reference_sets},
           {"annotators", corpus.annotators},
           {"inputs", inputs}}},
         {"grammar_checker", checker.empty() ? Json(nullptr) : Json(checker)}};
  return j.dump(2) + "\n";
}

void write_report(const ExperimentResult& result, const Corpus& corpus, const std::string& checker,
                  const std::string& out_dir, ReportFormat format) {
  if (result.config.measures.empty()) fail(ErrorKind::invalid_argument, "nothing to report: metric list is empty");
  const std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) fail(ErrorKind::io, "cannot create output directory " + out_dir);
  const std::string manifest = manifest_json(result, corpus, checker);
  if (format == ReportFormat::json) {
    write_file(dir / "report.json", report_json(result));
  } else {
    write_file(dir / "correlations.tsv", correlations_tsv(result));
    write_file(dir / "corpus_scores.tsv", corpus_scores_tsv(result));
    write_file(dir / "type_sensitivity.tsv", type_sensitivity_tsv(result));
    write_file(dir / "error_buckets.tsv", error_buckets_tsv(result));
  }
  write_file(dir / "manifest.json", manifest);
}

}  // namespace gecval
