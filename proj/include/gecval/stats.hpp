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
#include <span>
#include <string>
#include <vector>

namespace gecval {

enum class CoefficientKind { spearman_rho, pearson_r, kendall_tau };
const char* to_string(CoefficientKind kind) noexcept;

struct CorrelationReport {
  double coefficient = 0.0;
  CoefficientKind kind = CoefficientKind::pearson_r;
  std::size_t n = 0;  // points, or comparable pairs for tau
  double p_value = 1.0;
  std::string method;  // how p_value was obtained
  // tau only
  double discongruent = 0.0;  // ties count one half
  std::size_t ties = 0;
};

/// Average ranks, 1-based, ascending; tied values share their mean rank.
std::vector<double> average_ranks(std::span<const double> values);

/// Rank of each system by descending score (1 = best), ties share the mean rank.
std::vector<double> rank_systems(std::span<const double> scores);

/// Pearson correlation of average ranks. Exact permutation p-value (two-sided)
/// for n <= 10, Student t approximation otherwise. Throws invalid_argument on
/// length mismatch, n < 3 or a constant input.
CorrelationReport spearman(std::span<const double> xs, std::span<const double> ys);

/// Product-moment correlation with a two-sided t-test on n - 2 degrees of
/// freedom. Same preconditions as spearman.
CorrelationReport pearson(std::span<const double> xs, std::span<const double> ys);

/// Metric scores of a comparable pair, `higher` being the gold-preferred side.
struct PairJudgment {
  double lower = 0.0;
  double higher = 0.0;
};

struct PermutationOptions {
  std::size_t permutations = 10000;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

/// tau = 1 - 2 d / p over comparable pairs, d counting ties as one half.
/// The p-value comes from a sign-flip test: under the null each untied pair
/// is discongruent with probability 1/2, independently. Permutations run in
/// blocks with their own derived seeds, so the result does not depend on
/// `workers`. Throws invalid_argument on an empty list.
CorrelationReport kendall_tau_partial(std::span<const PairJudgment> pairs, const PermutationOptions& options = {});

/// Runs fn(i) for i in [0, n) on up to `workers` threads. The first exception
/// thrown is rethrown after all threads finish.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn);

}  // namespace gecval

#include "gecval/parallel.inl"
