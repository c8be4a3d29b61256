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

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "gecval/gecval.h"

namespace {

const char* kM2 =
    "S He go to school .\n"
    "A 1 2|||SVA|||goes|||REQUIRED|||-NONE-|||0\n"
    "A 1 2|||Vt|||went|||REQUIRED|||-NONE-|||1\n"
    "\n"
    "S I has a apple .\n"
    "A 1 2|||SVA|||have|||REQUIRED|||-NONE-|||0\n"
    "A 2 3|||ArtOrDet|||an|||REQUIRED|||-NONE-|||0\n"
    "A 1 2|||SVA|||have|||REQUIRED|||-NONE-|||1\n"
    "A 2 3|||ArtOrDet|||an|||REQUIRED|||-NONE-|||1\n"
    "\n"
    "S This is fine .\n"
    "A -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||0\n"
    "\n"
    "S She like cats and dog .\n"
    "A 1 2|||SVA|||likes|||REQUIRED|||-NONE-|||0\n"
    "A 4 5|||Nn|||dogs|||REQUIRED|||-NONE-|||0\n"
    "A 1 2|||SVA|||likes|||REQUIRED|||-NONE-|||1\n"
    "\n";

// Takes ownership of a library string.
std::string take(char* s) {
  std::string out = s ? s : "";
  gecval_string_free(s);
  return out;
}

struct CorpusGuard {
  gecval_corpus* c = nullptr;
  ~CorpusGuard() { gecval_corpus_free(c); }
};

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("gecval_capi_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(gecval_version()).size() > 0);
  CHECK(std::string(gecval_status_name(GECVAL_OK)) == "ok");
  CHECK(std::string(gecval_status_name(GECVAL_TRANSPORT)) == "transport error");
  CHECK(std::string(gecval_status_name(static_cast<gecval_status>(99))) == "unknown status");
  gecval_string_free(nullptr);
  gecval_corpus_free(nullptr);
  gecval_checker_free(nullptr);
  gecval_report_free(nullptr);
}

TEST_CASE("parse, inspect and serialize a corpus") {
  CorpusGuard g;
  REQUIRE(gecval_corpus_parse(kM2, 1, 1, &g.c) == GECVAL_OK);
  CHECK(gecval_corpus_size(g.c) == 3);  // the noop sentence is dropped
  char* s = nullptr;
  REQUIRE(gecval_corpus_reference(g.c, 0, 1, &s) == GECVAL_OK);
  CHECK(take(s) == "He went to school .");
  REQUIRE(gecval_corpus_reference(g.c, 2, 1, &s) == GECVAL_OK);
  CHECK(take(s) == "She likes cats and dog .");
  CHECK(gecval_corpus_reference(g.c, 0, 5, &s) == GECVAL_INVALID_ARGUMENT);
  CHECK(gecval_corpus_reference(g.c, 9, 0, &s) == GECVAL_INVALID_ARGUMENT);
  CHECK(std::string(gecval_last_error()).size() > 0);

  REQUIRE(gecval_corpus_summary(g.c, &s) == GECVAL_OK);
  const std::string summary = take(s);
  CHECK(summary.find("\"sentences\": 3") != std::string::npos);
  CHECK(summary.find("\"discarded_uncorrected\": 1") != std::string::npos);

  REQUIRE(gecval_corpus_write_m2(g.c, &s) == GECVAL_OK);
  const std::string m2 = take(s);
  CorpusGuard again;
  REQUIRE(gecval_corpus_parse(m2.c_str(), 1, 1, &again.c) == GECVAL_OK);
  REQUIRE(gecval_corpus_write_m2(again.c, &s) == GECVAL_OK);
  CHECK(take(s) == m2);

  CorpusGuard keep;
  REQUIRE(gecval_corpus_parse(kM2, 1, 0, &keep.c) == GECVAL_OK);
  CHECK(gecval_corpus_size(keep.c) == 4);
}

TEST_CASE("corpus errors map to status codes") {
  gecval_corpus* c = nullptr;
  CHECK(gecval_corpus_parse(nullptr, 1, 1, &c) == GECVAL_INVALID_ARGUMENT);
  CHECK(gecval_corpus_parse(kM2, 1, 1, nullptr) == GECVAL_INVALID_ARGUMENT);
  CHECK(gecval_corpus_parse("S a b\nA 0 1|||X|||y\n\n", 1, 1, &c) == GECVAL_PARSE);
  CHECK(c == nullptr);
  CHECK(std::string(gecval_last_error()).find("line 2") != std::string::npos);
  CHECK(gecval_corpus_parse("S a b\nA 5 6|||X|||y|||REQUIRED|||-NONE-|||0\n\n", 1, 1, &c) != GECVAL_OK);
  CHECK(gecval_corpus_load("/nonexistent/file.m2", nullptr, 0, 1, 1, &c) == GECVAL_IO);
  CHECK(gecval_corpus_load(GECVAL_TEST_DATA "/malformed.m2", nullptr, 0, 1, 1, &c) == GECVAL_PARSE);
  const char* overlap = "S a b c\nA 0 2|||X|||y|||REQUIRED|||-NONE-|||0\nA 1 3|||X|||z|||REQUIRED|||-NONE-|||0\n\n";
  CHECK(gecval_corpus_parse(overlap, 0, 1, &c) == GECVAL_PARSE);
  REQUIRE(gecval_corpus_parse(overlap, 1, 1, &c) == GECVAL_OK);
  gecval_corpus_free(c);
}

TEST_CASE("load with external references") {
  const auto dir = scratch("load");
  {
    std::ofstream(dir / "c.m2") << kM2;
    std::ofstream(dir / "refs.txt") << "He goes to the school .\nI have an apple .\nThis is fine .\nShe likes cats and dogs .\n";
  }
  const std::string m2 = (dir / "c.m2").string(), refs = (dir / "refs.txt").string();
  const char* paths[] = {refs.c_str()};
  CorpusGuard g;
  REQUIRE(gecval_corpus_load(m2.c_str(), paths, 1, 1, 1, &g.c) == GECVAL_OK);
  char* s = nullptr;
  REQUIRE(gecval_corpus_reference(g.c, 0, 2, &s) == GECVAL_OK);
  CHECK(take(s) == "He goes to the school .");
  REQUIRE(gecval_corpus_reference(g.c, 2, 2, &s) == GECVAL_OK);
  CHECK(take(s) == "She likes cats and dogs .");

  std::ofstream(dir / "short.txt") << "only one line\n";
  const std::string bad = (dir / "short.txt").string();
  const char* bad_paths[] = {bad.c_str()};
  gecval_corpus* c = nullptr;
  CHECK(gecval_corpus_load(m2.c_str(), bad_paths, 1, 1, 1, &c) == GECVAL_DATA);
  std::filesystem::remove_all(dir);
}

TEST_CASE("scoring through the C interface") {
  CHECK(gecval_metric_known("bleu") == 1);
  CHECK(gecval_metric_known("m2") == 1);
  CHECK(gecval_metric_known("oracle") == 0);
  CHECK(gecval_metric_known("nonsense") == 0);
  const char* refs[] = {"I have an apple .", "I have the apple ."};
  double v = -1;
  REQUIRE(gecval_score("bleu", "I has a apple .", "I have an apple .", refs, 2, 0, nullptr, &v) == GECVAL_OK);
  CHECK(v == doctest::Approx(1.0));
  REQUIRE(gecval_score("f_half", "I has a apple .", "I has a apple .", refs, 2, 0, nullptr, &v) == GECVAL_OK);
  CHECK(v == 0.0);
  REQUIRE(gecval_score("min_ld", "I has a apple .", "I have an apple .", refs, 2, 0, nullptr, &v) == GECVAL_OK);
  CHECK(v == 1.0);
  double g1 = 0, g2 = 0;
  REQUIRE(gecval_score("gleu", "I has a apple .", "I have a apple .", refs, 2, 3, nullptr, &g1) == GECVAL_OK);
  REQUIRE(gecval_score("gleu", "I has a apple .", "I have a apple .", refs, 2, 3, nullptr, &g2) == GECVAL_OK);
  CHECK(g1 == g2);
  CHECK(gecval_score("nonsense", "a", "a", refs, 2, 0, nullptr, &v) == GECVAL_INVALID_ARGUMENT);
  CHECK(gecval_score("lt", "a", "a", refs, 2, 0, nullptr, &v) == GECVAL_INVALID_ARGUMENT);
  CHECK(gecval_score("bleu", "a", "a", nullptr, 0, 0, nullptr, &v) == GECVAL_INVALID_ARGUMENT);
  CHECK(gecval_score("bleu", nullptr, "a", refs, 2, 0, nullptr, &v) == GECVAL_INVALID_ARGUMENT);
}

TEST_CASE("grammar checkers through the C interface") {
  gecval_checker* offline = nullptr;
  REQUIRE(gecval_checker_offline(&offline) == GECVAL_OK);
  std::size_t errors = 99;
  REQUIRE(gecval_checker_count(offline, "this is is a apple", &errors) == GECVAL_OK);
  CHECK(errors == 3);
  double v = 0;
  REQUIRE(gecval_score("lt", "x", "This is is a apple .", nullptr, 0, 0, offline, &v) == GECVAL_OK);
  CHECK(v == doctest::Approx(1.0 - 2.0 / 6.0));
  gecval_checker_free(offline);

  gecval_checker* remote = nullptr;
  CHECK(gecval_checker_remote("not a url", 100, 0, 0, &remote) == GECVAL_INVALID_ARGUMENT);
  REQUIRE(gecval_checker_remote("http://127.0.0.1:9", 200, 0, 0, &remote) == GECVAL_OK);
  CHECK(gecval_checker_count(remote, "hello", &errors) == GECVAL_TRANSPORT);
  gecval_checker_free(remote);
  unsetenv("GECVAL_GRAMMAR_ENDPOINT");
  CHECK(gecval_checker_remote(nullptr, 100, 0, 0, &remote) == GECVAL_INVALID_ARGUMENT);
  setenv("GECVAL_GRAMMAR_ENDPOINT", "http://127.0.0.1:9", 1);
  REQUIRE(gecval_checker_remote("", 100, 0, 0, &remote) == GECVAL_OK);
  gecval_checker_free(remote);
  unsetenv("GECVAL_GRAMMAR_ENDPOINT");
}

TEST_CASE("experiments and reports through the C interface") {
  CorpusGuard g;
  REQUIRE(gecval_corpus_parse(kM2, 1, 1, &g.c) == GECVAL_OK);
  const char* config = R"({"seed": 3, "metrics": ["oracle", "bleu", "f_half"], "models": [0, 1, 2],
                           "n_ch": 2, "permutations": 200, "source_modes": ["sampled", "original"]})";
  gecval_report* report = nullptr;
  REQUIRE(gecval_run(g.c, config, nullptr, &report) == GECVAL_OK);
  char* s = nullptr;
  REQUIRE(gecval_report_json(report, &s) == GECVAL_OK);
  const std::string json = take(s);
  CHECK(json.find("\"corpus_level\"") != std::string::npos);
  CHECK(json.find("\"metric\": \"f_half\"") != std::string::npos);

  const auto dir = scratch("report");
  REQUIRE(gecval_report_write(report, (dir / "tsv").string().c_str(), "tsv") == GECVAL_OK);
  CHECK(std::filesystem::exists(dir / "tsv" / "correlations.tsv"));
  CHECK(std::filesystem::exists(dir / "tsv" / "manifest.json"));
  REQUIRE(gecval_report_write(report, (dir / "json").string().c_str(), "json") == GECVAL_OK);
  CHECK(std::filesystem::exists(dir / "json" / "report.json"));
  CHECK(gecval_report_write(report, (dir / "x").string().c_str(), "xml") == GECVAL_INVALID_ARGUMENT);
  std::ofstream(dir / "blocker") << "x";
  CHECK(gecval_report_write(report, (dir / "blocker" / "sub").string().c_str(), "json") == GECVAL_IO);
  gecval_report_free(report);

  // same configuration, different worker count: same report
  const char* config8 = R"({"seed": 3, "metrics": ["oracle", "bleu", "f_half"], "models": [0, 1, 2],
                            "n_ch": 2, "permutations": 200, "source_modes": ["sampled", "original"], "workers": 8})";
  REQUIRE(gecval_run(g.c, config8, nullptr, &report) == GECVAL_OK);
  REQUIRE(gecval_report_json(report, &s) == GECVAL_OK);
  CHECK(take(s) == json);
  gecval_report_free(report);

  REQUIRE(gecval_dump_samples(g.c, config, &s) == GECVAL_OK);
  CHECK(take(s).find("kind\tmodel\trepeat") != std::string::npos);

  CHECK(gecval_run(g.c, R"({"metrics": []})", nullptr, &report) == GECVAL_INVALID_ARGUMENT);
  CHECK(gecval_run(g.c, R"({"metrics": ["lt"]})", nullptr, &report) == GECVAL_INVALID_ARGUMENT);
  CHECK(gecval_run(g.c, "not json", nullptr, &report) == GECVAL_INVALID_ARGUMENT);
  CHECK(gecval_run(nullptr, config, nullptr, &report) == GECVAL_INVALID_ARGUMENT);
  std::filesystem::remove_all(dir);
}

TEST_CASE("edit-combination reference counts") {
  CorpusGuard g;
  REQUIRE(gecval_corpus_parse(kM2, 1, 1, &g.c) == GECVAL_OK);
  char* s = nullptr;
  REQUIRE(gecval_corpus_count_imeasure(g.c, &s) == GECVAL_OK);
  const std::string json = take(s);
  // sentence 0: goes/went conflict on one span -> {go, goes, went}
  // sentence 1: two shared edits -> 1
  // sentence 3: likes shared (1), dogs only in one annotation (2)
  CHECK(json.find(R"({"sentence": 0, "count": "3"})") != std::string::npos);
  CHECK(json.find(R"({"sentence": 1, "count": "1"})") != std::string::npos);
  CHECK(json.find(R"({"sentence": 3, "count": "2"})") != std::string::npos);
}
