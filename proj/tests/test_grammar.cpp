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
#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <mutex>
#include <thread>

#include "gecval/error.hpp"
#include "gecval/grammar.hpp"
#include "stub_server.hpp"

using namespace gecval;
using gecval::testing::StubServer;
using Clock = std::chrono::steady_clock;

namespace {

std::string matches_body(int n) {
  std::string body = R"({"software":{"name":"stub"},"matches":[)";
  for (int i = 0; i < n; ++i)
    body += std::string(i ? "," : "") + R"({"offset":)" + std::to_string(i) + R"(,"length":1,"rule":{"id":"R)" +
            std::to_string(i) + R"("}})";
  return body + "]}";
}

CheckerEndpoint endpoint_for(const StubServer& s) {
  CheckerEndpoint e;
  e.base_url = s.url();
  e.timeout_ms = 2000;
  e.max_retries = 2;
  e.backoff_ms = 5;
  e.max_requests_per_second = 0;
  return e;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::invalid_argument;
}

}  // namespace

TEST_CASE("offline rules") {
  OfflineChecker c;
  CHECK(c.check("This is fine .").error_count == 0);
  CHECK(c.check("").error_count == 0);
  CHECK(c.check("   ").error_count == 0);

  const CheckResult r = c.check("this is is a apple");
  REQUIRE(r.error_count == 3);
  CHECK(r.matches[0].rule == "r2");
  CHECK(r.matches[1].rule == "r1");
  CHECK(r.matches[1].offset == 5);
  CHECK(r.matches[2].rule == "r3");

  CHECK(c.check("She bought an car .").error_count == 1);
  CHECK(c.check("She bought an car .").matches[0].rule == "r4");
  CHECK(c.check("An 8 and an hour").error_count == 1);  // "an hour" is r4 by spelling; digits are ignored
  CHECK(c.check("A egg , an egg , a dog .").error_count == 1);
  CHECK(c.check("Stop stop").error_count == 0);  // duplicates are exact-match only
  CHECK(c.describe() == "offline:offline-rules/1");
}

TEST_CASE("offline checking is a pure function") {
  OfflineChecker c;
  const std::string text = "the the a orange an banana";
  const CheckResult first = c.check(text);
  for (int i = 0; i < 5; ++i) CHECK(c.check(text).error_count == first.error_count);
  CHECK(first.error_count == 4);
}

TEST_CASE("response decoding") {
  CHECK(parse_check_response(matches_body(3)).error_count == 3);
  CHECK(parse_check_response(matches_body(3)).matches[2].rule == "R2");
  CHECK(parse_check_response(R"({"matches":[]})").error_count == 0);
  CHECK(kind_of([] { parse_check_response("<html>"); }) == ErrorKind::decode);
  CHECK(kind_of([] { parse_check_response(R"({"nomatches":1})"); }) == ErrorKind::decode);
  CHECK(kind_of([] { parse_check_response(R"({"matches":{}})"); }) == ErrorKind::decode);
}

TEST_CASE("endpoint validation") {
  CheckerEndpoint e;
  CHECK(kind_of([&] { RemoteChecker{e}; }) == ErrorKind::invalid_argument);
  e.base_url = "ftp://x";
  CHECK(kind_of([&] { RemoteChecker{e}; }) == ErrorKind::invalid_argument);
  e.base_url = "http://localhost:1";
  e.timeout_ms = 0;
  CHECK(kind_of([&] { RemoteChecker{e}; }) == ErrorKind::invalid_argument);
}

TEST_CASE("remote checker posts text and language and counts matches") {
  StubServer stub([](int n, const httplib::Request&, httplib::Response& res) {
    res.set_content(matches_body(n == 0 ? 0 : 3), "application/json");
  });
  RemoteChecker checker(endpoint_for(stub));
  CHECK(checker.check("A fine sentence .").error_count == 0);
  CHECK(checker.check("an bad bad sentence").error_count == 3);
  CHECK(stub.text(1) == "an bad bad sentence");
  CHECK(stub.language(0) == "en-US");
  CHECK(checker.describe().find(stub.url()) != std::string::npos);
}

TEST_CASE("remote checker honours a path prefix in the base URL") {
  httplib::Server server;
  server.Post("/lt/v2/check", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(matches_body(2), "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  CheckerEndpoint e;
  e.base_url = "http://127.0.0.1:" + std::to_string(port) + "/lt/";
  e.max_requests_per_second = 0;
  CHECK(RemoteChecker(e).check("x").error_count == 2);
  server.stop();
  t.join();
}

TEST_CASE("transient failures are retried") {
  StubServer stub([](int n, const httplib::Request&, httplib::Response& res) {
    if (n < 2) {
      res.status = n == 0 ? 503 : 429;
      return;
    }
    res.set_content(matches_body(1), "application/json");
  });
  RemoteChecker checker(endpoint_for(stub));
  CHECK(checker.check("retry me").error_count == 1);
  CHECK(stub.requests() == 3);
}

TEST_CASE("persistent 500s end in a transport error after the retry budget") {
  StubServer stub([](int, const httplib::Request&, httplib::Response& res) { res.status = 500; });
  RemoteChecker checker(endpoint_for(stub));
  CHECK(kind_of([&] { checker.check("x"); }) == ErrorKind::transport);
  CHECK(stub.requests() == 3);
}

TEST_CASE("client errors are protocol errors and are not retried") {
  StubServer stub([](int, const httplib::Request&, httplib::Response& res) { res.status = 400; });
  RemoteChecker checker(endpoint_for(stub));
  try {
    checker.check("x");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::protocol);
    CHECK(std::string(e.what()).find("400") != std::string::npos);
  }
  CHECK(stub.requests() == 1);
}

TEST_CASE("unreadable bodies are decode errors") {
  StubServer stub([](int, const httplib::Request&, httplib::Response& res) { res.set_content("oops", "text/plain"); });
  RemoteChecker checker(endpoint_for(stub));
  CHECK(kind_of([&] { checker.check("x"); }) == ErrorKind::decode);
}

TEST_CASE("an unreachable service is a transport error") {
  CheckerEndpoint e;
  e.base_url = "http://127.0.0.1:9";
  e.timeout_ms = 300;
  e.max_retries = 1;
  e.backoff_ms = 1;
  RemoteChecker checker(e);
  CHECK(kind_of([&] { checker.check("x"); }) == ErrorKind::transport);
}

TEST_CASE("answers are cached by exact text") {
  StubServer stub([](int, const httplib::Request&, httplib::Response& res) {
    res.set_content(matches_body(2), "application/json");
  });
  CheckerEndpoint e = endpoint_for(stub);
  e.cache_capacity = 2;
  RemoteChecker checker(e);
  checker.check("one");
  checker.check("one");
  CHECK(stub.requests() == 1);
  checker.check("two");
  checker.check("three");  // evicts "one"
  checker.check("three");
  CHECK(stub.requests() == 3);
  checker.check("one");
  CHECK(stub.requests() == 4);
}

TEST_CASE("the request rate never exceeds the limit, even from several threads") {
  StubServer stub([](int, const httplib::Request&, httplib::Response& res) {
    res.set_content(matches_body(0), "application/json");
  });
  CheckerEndpoint e = endpoint_for(stub);
  e.max_requests_per_second = 10;
  RemoteChecker checker(e);
  const auto start = Clock::now();
  std::vector<std::thread> threads;
  for (int t = 0; t < 3; ++t)
    threads.emplace_back([&, t] {
      for (int i = 0; i < 3; ++i) checker.check("text " + std::to_string(t) + " " + std::to_string(i));
    });
  for (auto& t : threads) t.join();
  auto arrivals = stub.arrivals();
  REQUIRE(arrivals.size() == 9);
  std::sort(arrivals.begin(), arrivals.end());
  // Arrival jitter only delays requests, so the k-th arrival can never come
  // earlier than k intervals after the first call.
  for (std::size_t k = 0; k < arrivals.size(); ++k)
    CHECK(std::chrono::duration<double>(arrivals[k] - start).count() >= 0.1 * static_cast<double>(k) - 0.002);
}
