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

#include "gecval/gecval.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "gecval/analysis.hpp"
#include "gecval/corpus.hpp"
#include "gecval/error.hpp"
#include "gecval/grammar.hpp"
#include "gecval/imeasure.hpp"
#include "gecval/metrics.hpp"
#include "gecval/report.hpp"

struct gecval_corpus {
  std::shared_ptr<const gecval::Corpus> corpus;
};

struct gecval_checker {
  std::unique_ptr<gecval::GrammarChecker> checker;
};

struct gecval_report {
  std::shared_ptr<const gecval::Corpus> corpus;
  gecval::ExperimentResult result;
  std::string checker;
};

namespace {

thread_local std::string last_error;

gecval_status status_of(gecval::ErrorKind kind) {
  using gecval::ErrorKind;
  switch (kind) {
    case ErrorKind::invalid_argument: return GECVAL_INVALID_ARGUMENT;
    case ErrorKind::parse: return GECVAL_PARSE;
    case ErrorKind::data: return GECVAL_DATA;
    case ErrorKind::io: return GECVAL_IO;
    case ErrorKind::transport: return GECVAL_TRANSPORT;
    case ErrorKind::protocol: return GECVAL_PROTOCOL;
    case ErrorKind::decode: return GECVAL_DECODE;
  }
  return GECVAL_INTERNAL;
}

template <typename Fn>
gecval_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return GECVAL_OK;
  } catch (const gecval::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown failure";
  }
  return GECVAL_INTERNAL;
}

void require(const void* p, const char* what) {
  if (!p) gecval::fail(gecval::ErrorKind::invalid_argument, std::string(what) + " is NULL");
}

char* copy_out(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

gecval::ParseOptions parse_options(int merge_overlaps, int discard_uncorrected) {
  gecval::ParseOptions options;
  options.policy = merge_overlaps ? gecval::IntersectionPolicy::merge : gecval::IntersectionPolicy::reject;
  options.discard_uncorrected = discard_uncorrected != 0;
  return options;
}

}  // namespace

extern "C" {

const char* gecval_version(void) { return GECVAL_VERSION; }

const char* gecval_last_error(void) { return last_error.c_str(); }

const char* gecval_status_name(gecval_status status) {
  switch (status) {
    case GECVAL_OK: return "ok";
    case GECVAL_INVALID_ARGUMENT: return "invalid argument";
    case GECVAL_PARSE: return "parse error";
    case GECVAL_DATA: return "data error";
    case GECVAL_IO: return "i/o error";
    case GECVAL_TRANSPORT: return "transport error";
    case GECVAL_PROTOCOL: return "protocol error";
    case GECVAL_DECODE: return "decode error";
    case GECVAL_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void gecval_string_free(char* s) { std::free(s); }

gecval_status gecval_corpus_load(const char* m2_path, const char* const* ref_paths, size_t n_refs, int merge_overlaps,
                                 int discard_uncorrected, gecval_corpus** out) {
  return guarded([&] {
    require(m2_path, "m2_path");
    require(out, "out");
    if (n_refs) require(ref_paths, "ref_paths");
    auto corpus = std::make_shared<gecval::Corpus>(gecval::load_m2(m2_path, parse_options(merge_overlaps, discard_uncorrected)));
    for (size_t i = 0; i < n_refs; ++i) {
      require(ref_paths[i], "reference path");
      gecval::load_references(*corpus, ref_paths[i]);
    }
    *out = new gecval_corpus{std::move(corpus)};
  });
}

gecval_status gecval_corpus_parse(const char* m2_text, int merge_overlaps, int discard_uncorrected, gecval_corpus** out) {
  return guarded([&] {
    require(m2_text, "m2_text");
    require(out, "out");
    std::istringstream in(m2_text);
    *out = new gecval_corpus{
        std::make_shared<gecval::Corpus>(gecval::parse_m2(in, parse_options(merge_overlaps, discard_uncorrected)))};
  });
}

void gecval_corpus_free(gecval_corpus* corpus) { delete corpus; }

size_t gecval_corpus_size(const gecval_corpus* corpus) { return corpus ? corpus->corpus->size() : 0; }

gecval_status gecval_corpus_summary(const gecval_corpus* corpus, char** json_out) {
  return guarded([&] {
    require(corpus, "corpus");
    require(json_out, "json_out");
    *json_out = copy_out(gecval::corpus_summary_json(*corpus->corpus));
  });
}

gecval_status gecval_corpus_reference(const gecval_corpus* corpus, size_t index, size_t ref, char** out) {
  return guarded([&] {
    require(corpus, "corpus");
    require(out, "out");
    const auto& records = corpus->corpus->records;
    if (index >= records.size()) gecval::fail(gecval::ErrorKind::invalid_argument, "sentence index out of range");
    if (ref >= records[index].references.size())
      gecval::fail(gecval::ErrorKind::invalid_argument, "reference index out of range");
    *out = copy_out(records[index].references[ref]);
  });
}

gecval_status gecval_corpus_write_m2(const gecval_corpus* corpus, char** out) {
  return guarded([&] {
    require(corpus, "corpus");
    require(out, "out");
    *out = copy_out(gecval::write_m2(*corpus->corpus));
  });
}

gecval_status gecval_corpus_count_imeasure(const gecval_corpus* corpus, char** json_out) {
  return guarded([&] {
    require(corpus, "corpus");
    require(json_out, "json_out");
    std::string json = "[";
    bool first = true;
    for (const auto& record : corpus->corpus->records) {
      if (!first) json += ",";
      first = false;
      json += "\n  {\"sentence\": " + std::to_string(record.id) + ", \"count\": \"" +
              gecval::count_imeasure_refs(record).str() + "\"}";
    }
    json += first ? "]" : "\n]";
    *json_out = copy_out(json);
  });
}

int gecval_metric_known(const char* name) { return name && gecval::metric_from_name(name).has_value() ? 1 : 0; }

gecval_status gecval_score(const char* metric, const char* source, const char* candidate,
                           const char* const* references, size_t n_references, uint64_t seed,
                           gecval_checker* checker, double* out) {
  return guarded([&] {
    require(metric, "metric");
    require(source, "source");
    require(candidate, "candidate");
    require(out, "out");
    if (n_references) require(references, "references");
    const auto id = gecval::metric_from_name(metric);
    if (!id) gecval::fail(gecval::ErrorKind::invalid_argument, std::string("unknown metric '") + metric + "'");
    gecval::EvalInput input{source, candidate, {}, 0};
    for (size_t i = 0; i < n_references; ++i) {
      require(references[i], "reference");
      input.references.emplace_back(references[i]);
    }
    gecval::MetricConfig config;
    config.seed = seed;
    *out = gecval::score(*id, input, config, checker ? checker->checker.get() : nullptr);
  });
}

gecval_status gecval_checker_offline(gecval_checker** out) {
  return guarded([&] {
    require(out, "out");
    *out = new gecval_checker{std::make_unique<gecval::OfflineChecker>()};
  });
}

gecval_status gecval_checker_remote(const char* base_url, int timeout_ms, int max_retries, double max_requests_per_second,
                                    gecval_checker** out) {
  return guarded([&] {
    require(out, "out");
    gecval::CheckerEndpoint endpoint;
    if (base_url && *base_url) endpoint.base_url = base_url;
    else if (const char* env = std::getenv(gecval::kGrammarEndpointEnv)) endpoint.base_url = env;
    if (endpoint.base_url.empty())
      gecval::fail(gecval::ErrorKind::invalid_argument,
                   std::string("no grammar endpoint given and ") + gecval::kGrammarEndpointEnv + " is unset");
    endpoint.timeout_ms = timeout_ms;
    endpoint.max_retries = max_retries;
    endpoint.max_requests_per_second = max_requests_per_second;
    *out = new gecval_checker{std::make_unique<gecval::RemoteChecker>(endpoint)};
  });
}

gecval_status gecval_checker_count(gecval_checker* checker, const char* text, size_t* errors_out) {
  return guarded([&] {
    require(checker, "checker");
    require(text, "text");
    require(errors_out, "errors_out");
    *errors_out = checker->checker->check(text).error_count;
  });
}

void gecval_checker_free(gecval_checker* checker) { delete checker; }

gecval_status gecval_run(const gecval_corpus* corpus, const char* config_json, gecval_checker* checker,
                         gecval_report** out) {
  return guarded([&] {
    require(corpus, "corpus");
    require(config_json, "config_json");
    require(out, "out");
    const gecval::ExperimentConfig config = gecval::config_from_json(config_json);
    gecval::GrammarChecker* impl = checker ? checker->checker.get() : nullptr;
    auto report = std::make_unique<gecval_report>();
    report->corpus = corpus->corpus;
    report->result = gecval::run_experiment(*corpus->corpus, config, impl);
    report->checker = impl ? impl->describe() : std::string();
    *out = report.release();
  });
}

gecval_status gecval_report_json(const gecval_report* report, char** json_out) {
  return guarded([&] {
    require(report, "report");
    require(json_out, "json_out");
    *json_out = copy_out(gecval::report_json(report->result));
  });
}

gecval_status gecval_report_write(const gecval_report* report, const char* out_dir, const char* format) {
  return guarded([&] {
    require(report, "report");
    require(out_dir, "out_dir");
    require(format, "format");
    gecval::write_report(report->result, *report->corpus, report->checker, out_dir, gecval::parse_report_format(format));
  });
}

void gecval_report_free(gecval_report* report) { delete report; }

gecval_status gecval_dump_samples(const gecval_corpus* corpus, const char* config_json, char** out) {
  return guarded([&] {
    require(corpus, "corpus");
    require(config_json, "config_json");
    require(out, "out");
    *out = copy_out(gecval::dump_samples(*corpus->corpus, gecval::config_from_json(config_json)));
  });
}

}  // extern "C"
