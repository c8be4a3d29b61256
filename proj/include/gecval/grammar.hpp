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

#include <chrono>
#include <cstddef>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gecval {

struct CheckMatch {
  std::size_t offset = 0;  // byte offset into the checked text
  std::size_t length = 0;
  std::string rule;
};

struct CheckResult {
  std::size_t error_count = 0;  // == matches.size()
  std::vector<CheckMatch> matches;
};

class GrammarChecker {
 public:
  virtual ~GrammarChecker() = default;
  virtual CheckResult check(std::string_view text) = 0;
  /// Identifies the checker and its configuration for run manifests.
  virtual std::string describe() const = 0;
};

/// Deterministic rule set for tests and offline runs:
///   r1  a token identical to the token before it
///   r2  text that starts with a lowercase ASCII letter
///   r3  "a" (any case) before a token starting with a vowel letter
///   r4  "an" (any case) before a token starting with a consonant letter
class OfflineChecker final : public GrammarChecker {
 public:
  static constexpr const char* kVersion = "offline-rules/1";
  CheckResult check(std::string_view text) override;
  std::string describe() const override;
};

struct CheckerEndpoint {
  std::string base_url;  // scheme://host[:port][/prefix]
  int timeout_ms = 10000;
  int max_retries = 3;
  std::string language = "en-US";
  double max_requests_per_second = 20.0;  // <= 0 disables the limiter
  std::size_t cache_capacity = 65536;
  int backoff_ms = 100;  // first retry delay, doubled per attempt

  void validate() const;
};

/// Name of the environment variable that overrides the endpoint URL.
inline constexpr const char* kGrammarEndpointEnv = "GECVAL_GRAMMAR_ENDPOINT";

/// Client for a LanguageTool-compatible HTTP service. Safe to share between
/// threads: requests are rate limited and answers cached by exact text.
class RemoteChecker final : public GrammarChecker {
 public:
  explicit RemoteChecker(CheckerEndpoint endpoint);
  ~RemoteChecker() override;

  CheckResult check(std::string_view text) override;
  std::string describe() const override;

  const CheckerEndpoint& endpoint() const noexcept { return endpoint_; }
  std::size_t requests_sent() const;

 private:
  CheckResult fetch(const std::string& text);
  void wait_for_slot();

  CheckerEndpoint endpoint_;
  std::string scheme_host_;
  std::string path_;

  mutable std::mutex cache_mutex_;
  std::list<std::pair<std::string, CheckResult>> lru_;
  std::unordered_map<std::string, std::list<std::pair<std::string, CheckResult>>::iterator> index_;

  mutable std::mutex rate_mutex_;
  std::chrono::steady_clock::time_point next_slot_{};
  std::size_t sent_ = 0;
};

/// Parses a service response body; throws a decode error when it is not a
/// JSON object with a `matches` array.
CheckResult parse_check_response(std::string_view body);

}  // namespace gecval
