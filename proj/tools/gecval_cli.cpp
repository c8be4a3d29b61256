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

// Command-line front end. Talks to the library only through gecval.h.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gecval/gecval.h"

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kService = 3 };

int exit_code(gecval_status status) {
  switch (status) {
    case GECVAL_OK: return kOk;
    case GECVAL_INVALID_ARGUMENT: return kUsage;
    case GECVAL_TRANSPORT:
    case GECVAL_PROTOCOL:
    case GECVAL_DECODE: return kService;
    default: return kData;
  }
}

struct Failure {
  int code;
};

void check(gecval_status status, const char* doing) {
  if (status == GECVAL_OK) return;
  std::cerr << "gecval: " << doing << ": " << gecval_last_error() << '\n';
  throw Failure{exit_code(status)};
}

struct CorpusOptions {
  std::string m2;
  std::vector<std::string> refs;
  std::string merge_policy = "merge";
  bool keep_uncorrected = false;
};

struct RunOptions {
  std::vector<std::string> metrics;
  std::vector<double> models;
  std::size_t n_ch = 1;
  std::uint64_t seed = 0;
  std::optional<std::string> source_mode;
  std::string grammar_endpoint;
  bool offline_grammar = false;
  int grammar_timeout_ms = 10000;
  int grammar_retries = 3;
  double grammar_rate = 20.0;
  std::string out = "gecval_report";
  std::string format = "tsv";
  std::size_t workers = 1;
  std::size_t repeats = 1;
  bool held_out_refs = false;
  std::size_t permutations = 10000;
  std::size_t gleu_iterations = 500;
  std::string dump_samples;
};

void add_corpus_options(CLI::App* cmd, CorpusOptions& o) {
  cmd->add_option("--m2", o.m2, "M2 file")->required();
  cmd->add_option("--refs", o.refs, "extra reference files, one sentence per line")->expected(1, -1);
  cmd->add_option("--merge-policy", o.merge_policy, "overlapping edits in one annotation")
      ->check(CLI::IsMember({"merge", "reject"}));
  cmd->add_flag("--keep-uncorrected", o.keep_uncorrected, "keep sentences some annotator left unchanged");
}

void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--metrics", o.metrics, "comma-separated metric names")->delimiter(',');
  cmd->add_option("--models", o.models, "corpus models (expected applied edits), comma-separated")->delimiter(',');
  cmd->add_option("--n-ch", o.n_ch, "chains per sentence and annotation")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "global seed");
  cmd->add_option("--source-mode", o.source_mode, "sampled|original")->check(CLI::IsMember({"sampled", "original"}));
  auto* endpoint = cmd->add_option("--grammar-endpoint", o.grammar_endpoint, "LanguageTool-compatible base URL");
  auto* offline = cmd->add_flag("--offline-grammar", o.offline_grammar, "use the bundled rule checker");
  endpoint->excludes(offline);
  cmd->add_option("--grammar-timeout-ms", o.grammar_timeout_ms)->check(CLI::PositiveNumber);
  cmd->add_option("--grammar-retries", o.grammar_retries)->check(CLI::NonNegativeNumber);
  cmd->add_option("--grammar-rate", o.grammar_rate, "max requests per second");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--format", o.format, "tsv|json")->check(CLI::IsMember({"tsv", "json"}));
  cmd->add_option("--workers", o.workers)->check(CLI::PositiveNumber);
  cmd->add_option("--repeats", o.repeats, "model corpora per model, averaged")->check(CLI::PositiveNumber);
  cmd->add_flag("--held-out-refs", o.held_out_refs, "do not score against the lattice's own annotation");
  cmd->add_option("--permutations", o.permutations)->check(CLI::PositiveNumber);
  cmd->add_option("--gleu-iterations", o.gleu_iterations)->check(CLI::PositiveNumber);
  cmd->add_option("--dump-samples", o.dump_samples, "write every sampled correction to this TSV file");
}

using CorpusPtr = std::unique_ptr<gecval_corpus, decltype(&gecval_corpus_free)>;
using CheckerPtr = std::unique_ptr<gecval_checker, decltype(&gecval_checker_free)>;

CorpusPtr load(const CorpusOptions& o) {
  std::vector<const char*> refs;
  for (const auto& r : o.refs) refs.push_back(r.c_str());
  gecval_corpus* corpus = nullptr;
  check(gecval_corpus_load(o.m2.c_str(), refs.data(), refs.size(), o.merge_policy == "merge", !o.keep_uncorrected,
                           &corpus),
        "loading corpus");
  return CorpusPtr(corpus, gecval_corpus_free);
}

std::string take(char* s) {
  std::string out(s ? s : "");
  gecval_string_free(s);
  return out;
}

bool mentions_grammar(const std::vector<std::string>& metrics) {
  for (const auto& m : metrics)
    if (m == "lt" || m == "grammaticality") return true;
  return false;
}

int run_analysis(const CorpusOptions& co, const RunOptions& ro, const std::string& command) {
  const char* env_endpoint = std::getenv("GECVAL_GRAMMAR_ENDPOINT");
  const bool have_checker = ro.offline_grammar || !ro.grammar_endpoint.empty() || (env_endpoint && *env_endpoint);
  std::vector<std::string> metrics = ro.metrics;
  if (metrics.empty()) {
    metrics = {"oracle", "bleu", "gleu", "ibleu", "sari", "max_sari", "f_half", "min_ld", "ld_source"};
    if (have_checker) metrics.push_back("lt");
  }
  for (const auto& m : metrics)
    if (m != "oracle" && m != "anti_oracle" && !gecval_metric_known(m.c_str())) {
      std::cerr << "gecval: unknown metric '" << m << "'\n";
      return kUsage;
    }
  CheckerPtr checker(nullptr, gecval_checker_free);
  if (mentions_grammar(metrics)) {
    gecval_checker* c = nullptr;
    if (ro.offline_grammar) {
      check(gecval_checker_offline(&c), "creating grammar checker");
    } else {
      if (!have_checker) {
        std::cerr << "gecval: grammaticality needs --grammar-endpoint, --offline-grammar or GECVAL_GRAMMAR_ENDPOINT\n";
        return kUsage;
      }
      check(gecval_checker_remote(ro.grammar_endpoint.c_str(), ro.grammar_timeout_ms, ro.grammar_retries,
                                  ro.grammar_rate, &c),
            "creating grammar checker");
    }
    checker.reset(c);
  }

  nlohmann::ordered_json config{{"seed", ro.seed},
                                {"metrics", metrics},
                                {"n_ch", ro.n_ch},
                                {"repeats", ro.repeats},
                                {"held_out_refs", ro.held_out_refs},
                                {"permutations", ro.permutations},
                                {"workers", ro.workers},
                                {"gleu_iterations", ro.gleu_iterations}};
  if (!ro.models.empty()) config["models"] = ro.models;
  if (ro.source_mode) config["source_modes"] = {*ro.source_mode};
  else if (command == "full") config["source_modes"] = {"sampled", "original"};
  const bool full = command == "full";
  config["analyses"] = {{"corpus_level", full || command == "corpus-eval"},
                        {"sentence_level", full || command == "sentence-eval"},
                        {"type_sensitivity", full || command == "type-sensitivity"},
                        {"error_buckets", full || command == "sentence-eval"}};
  const std::string config_text = config.dump();

  CorpusPtr corpus = load(co);
  if (!ro.dump_samples.empty()) {
    char* dump = nullptr;
    check(gecval_dump_samples(corpus.get(), config_text.c_str(), &dump), "sampling");
    std::ofstream out(ro.dump_samples, std::ios::binary);
    out << take(dump);
    if (!out) {
      std::cerr << "gecval: cannot write " << ro.dump_samples << '\n';
      return kData;
    }
  }
  gecval_report* raw = nullptr;
  check(gecval_run(corpus.get(), config_text.c_str(), checker.get(), &raw), command.c_str());
  std::unique_ptr<gecval_report, decltype(&gecval_report_free)> report(raw, gecval_report_free);
  check(gecval_report_write(report.get(), ro.out.c_str(), ro.format.c_str()), "writing report");
  std::cerr << "gecval: " << command << " report written to " << ro.out << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluate grammatical error correction metrics against corrections lattices"};
  app.set_version_flag("--version", gecval_version());
  app.require_subcommand(1);

  CorpusOptions ingest_opts;
  auto* ingest = app.add_subcommand("ingest", "parse and validate a corpus, print statistics");
  add_corpus_options(ingest, ingest_opts);

  CorpusOptions count_opts;
  std::string count_out;
  auto* count = app.add_subcommand("count-imeasure", "count edit-combination references per sentence");
  add_corpus_options(count, count_opts);
  count->add_option("--out", count_out, "write the JSON here instead of stdout");

  struct Analysis {
    CLI::App* cmd;
    CorpusOptions corpus;
    RunOptions run;
  };
  std::vector<std::unique_ptr<Analysis>> analyses;
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"corpus-eval", "corpus-level rank correlation over corpus models"},
           {"sentence-eval", "sentence-level correlations over sampled chains"},
           {"type-sensitivity", "mean score change per edit type"},
           {"full", "every analysis, sampled and original sources side by side"}}) {
    auto a = std::make_unique<Analysis>();
    a->cmd = app.add_subcommand(name, help);
    add_corpus_options(a->cmd, a->corpus);
    add_run_options(a->cmd, a->run);
    analyses.push_back(std::move(a));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*ingest) {
      CorpusPtr corpus = load(ingest_opts);
      char* summary = nullptr;
      check(gecval_corpus_summary(corpus.get(), &summary), "summarizing corpus");
      std::cout << take(summary) << '\n';
      return kOk;
    }
    if (*count) {
      CorpusPtr corpus = load(count_opts);
      char* json = nullptr;
      check(gecval_corpus_count_imeasure(corpus.get(), &json), "counting references");
      const std::string text = take(json) + "\n";
      if (count_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(count_out, std::ios::binary);
        out << text;
        if (!out) {
          std::cerr << "gecval: cannot write " << count_out << '\n';
          return kData;
        }
      }
      return kOk;
    }
    for (const auto& a : analyses)
      if (*a->cmd) return run_analysis(a->corpus, a->run, a->cmd->get_name());
  } catch (const Failure& f) {
    return f.code;
  }
  return kUsage;
}
