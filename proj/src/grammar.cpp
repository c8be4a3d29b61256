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

#include "gecval/grammar.hpp"

#include <httplib.h>

#include <cctype>
#include <cmath>
#include <json.hpp>
#include <thread>

#include "gecval/error.hpp"

namespace gecval {

namespace {

struct Span {
  std::size_t offset;
  std::string_view text;
};

std::vector<Span> spans(std::string_view text) {
  std::vector<Span> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) out.push_back({start, text.substr(start, i - start)});
  }
  return out;
}

bool is_ascii_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 && static_cast<unsigned char>(c) < 0x80; }

bool is_vowel(char c) {
  switch (std::tolower(static_cast<unsigned char>(c))) {
    case 'a': case 'e': case 'i': case 'o': case 'u': return true;
    default: return false;
  }
}

bool equals_ignoring_case(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i]))) return false;
  return true;
}

}  // namespace

CheckResult OfflineChecker::check(std::string_view text) {
  CheckResult result;
  const auto tokens = spans(text);
  auto add = [&](std::size_t offset, std::size_t length, const char* rule) {
    result.matches.push_back({offset, length, rule});
  };
  if (!tokens.empty()) {
    const char first = tokens.front().text.front();
    if (first >= 'a' && first <= 'z') add(tokens.front().offset, tokens.front().text.size(), "r2");
  }
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const Span& prev = tokens[i - 1];
    const Span& cur = tokens[i];
    const std::size_t pair_length = cur.offset + cur.text.size() - prev.offset;
    if (cur.text == prev.text) add(prev.offset, pair_length, "r1");
    const char head = cur.text.front();
    if (equals_ignoring_case(prev.text, "a") && is_vowel(head)) add(prev.offset, pair_length, "r3");
    if (equals_ignoring_case(prev.text, "an") && is_ascii_alpha(head) && !is_vowel(head))
      add(prev.offset, pair_length, "r4");
  }
  std::stable_sort(result.matches.begin(), result.matches.end(),
                   [](const CheckMatch& a, const CheckMatch& b) { return a.offset < b.offset; });
  result.error_count = result.matches.size();
  return result;
}

std::string OfflineChecker::describe() const { return std::string("offline:") + kVersion; }

void CheckerEndpoint::validate() const {
  if (base_url.empty()) fail(ErrorKind::invalid_argument, "grammar endpoint URL is empty");
  if (base_url.rfind("http://", 0) != 0 && base_url.rfind("https://", 0) != 0)
    fail(ErrorKind::invalid_argument, "grammar endpoint must be an http:// or https:// URL: " + base_url);
  if (timeout_ms <= 0) fail(ErrorKind::invalid_argument, "grammar endpoint timeout must be positive");
  if (max_retries < 0) fail(ErrorKind::invalid_argument, "grammar endpoint retries must be non-negative");
  if (backoff_ms < 0) fail(ErrorKind::invalid_argument, "grammar endpoint backoff must be non-negative");
  if (language.empty()) fail(ErrorKind::invalid_argument, "grammar endpoint language is empty");
}

CheckResult parse_check_response(std::string_view body) {
  const auto doc = nlohmann::json::parse(body.begin(), body.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) fail(ErrorKind::decode, "grammar service returned a non-JSON body");
  const auto it = doc.find("matches");
  if (it == doc.end() || !it->is_array()) fail(ErrorKind::decode, "grammar service response has no matches array");
  CheckResult result;
  for (const auto& m : *it) {
    CheckMatch match;
    if (m.is_object()) {
      if (auto o = m.find("offset"); o != m.end() && o->is_number_unsigned()) match.offset = o->get<std::size_t>();
      if (auto l = m.find("length"); l != m.end() && l->is_number_unsigned()) match.length = l->get<std::size_t>();
      if (auto r = m.find("rule"); r != m.end() && r->is_object()) {
        if (auto id = r->find("id"); id != r->end() && id->is_string()) match.rule = id->get<std::string>();
      }
    }
    result.matches.push_back(std::move(match));
  }
  result.error_count = result.matches.size();
  return result;
}

RemoteChecker::RemoteChecker(CheckerEndpoint endpoint) : endpoint_(std::move(endpoint)) {
  endpoint_.validate();
  const std::size_t after_scheme = endpoint_.base_url.find("://") + 3;
  const std::size_t slash = endpoint_.base_url.find('/', after_scheme);
  scheme_host_ = endpoint_.base_url.substr(0, slash);
  std::string prefix = slash == std::string::npos ? "" : endpoint_.base_url.substr(slash);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  path_ = prefix + "/v2/check";
}

RemoteChecker::~RemoteChecker() = default;

std::string RemoteChecker::describe() const {
  return "remote:" + endpoint_.base_url + " language=" + endpoint_.language;
}

std::size_t RemoteChecker::requests_sent() const {
  std::lock_guard lock(rate_mutex_);
  return sent_;
}

void RemoteChecker::wait_for_slot() {
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(rate_mutex_);
    const auto now = std::chrono::steady_clock::now();
    slot = std::max(now, next_slot_);
    if (endpoint_.max_requests_per_second > 0) {
      const auto interval = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
          std::chrono::duration<double>(1.0 / endpoint_.max_requests_per_second));
      next_slot_ = slot + interval;
    }
    ++sent_;
  }
  std::this_thread::sleep_until(slot);
}

CheckResult RemoteChecker::fetch(const std::string& text) {
  const auto timeout = std::chrono::milliseconds(endpoint_.timeout_ms);
  std::string last_problem;
  const int attempts = endpoint_.max_retries + 1;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) {
      const auto delay = std::chrono::milliseconds(static_cast<long long>(endpoint_.backoff_ms) << std::min(attempt - 1, 16));
      std::this_thread::sleep_for(delay);
    }
    wait_for_slot();
    httplib::Client client(scheme_host_);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    const httplib::Params form{{"text", text}, {"language", endpoint_.language}};
    const auto res = client.Post(path_, form);
    if (!res) {
      last_problem = "request failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_problem = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status < 200 || res->status >= 300)
      fail(ErrorKind::protocol, "grammar service " + endpoint_.base_url + " answered HTTP " + std::to_string(res->status));
    return parse_check_response(res->body);
  }
  fail(ErrorKind::transport, "grammar service " + endpoint_.base_url + " unavailable after " + std::to_string(attempts) +
                                 " attempt(s): " + last_problem);
}

CheckResult RemoteChecker::check(std::string_view text) {
  std::string key(text);
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = index_.find(key); it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->second;
    }
  }
  CheckResult result = fetch(key);
  if (endpoint_.cache_capacity > 0) {
    std::lock_guard lock(cache_mutex_);
    if (!index_.contains(key)) {
      lru_.emplace_front(key, result);
      index_.emplace(std::move(key), lru_.begin());
      if (lru_.size() > endpoint_.cache_capacity) {
        index_.erase(lru_.back().first);
        lru_.pop_back();
      }
    }
  }
  return result;
}

}  // namespace gecval
