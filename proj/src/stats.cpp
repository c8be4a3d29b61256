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

#include "gecval/stats.hpp"

#include <algorithm>
#include <bit>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>

#include "gecval/error.hpp"
#include "gecval/rng.hpp"

namespace gecval {

namespace {

constexpr std::size_t kExactSpearmanLimit = 10;
constexpr std::size_t kPermutationBlock = 1000;
constexpr double kTolerance = 1e-12;

void check_inputs(std::span<const double> xs, std::span<const double> ys, const char* what) {
  if (xs.size() != ys.size())
    fail(ErrorKind::invalid_argument, std::string(what) + ": length mismatch (" + std::to_string(xs.size()) + " vs " +
                                          std::to_string(ys.size()) + ")");
  if (xs.size() < 3) fail(ErrorKind::invalid_argument, std::string(what) + ": need at least 3 points");
  for (double v : xs)
    if (!std::isfinite(v)) fail(ErrorKind::invalid_argument, std::string(what) + ": non-finite value");
  for (double v : ys)
    if (!std::isfinite(v)) fail(ErrorKind::invalid_argument, std::string(what) + ": non-finite value");
}

double correlation(std::span<const double> xs, std::span<const double> ys, const char* what) {
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) fail(ErrorKind::invalid_argument, std::string(what) + ": constant input, correlation undefined");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double t_test(double r, std::size_t n) {
  if (std::abs(r) >= 1.0) return 0.0;
  const double df = static_cast<double>(n) - 2.0;
  const double t = r * std::sqrt(df / (1.0 - r * r));
  boost::math::students_t dist(df);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

}  // namespace

const char* to_string(CoefficientKind kind) noexcept {
  switch (kind) {
    case CoefficientKind::spearman_rho: return "spearman_rho";
    case CoefficientKind::pearson_r: return "pearson_r";
    case CoefficientKind::kendall_tau: return "kendall_tau";
  }
  return "?";
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::vector<double> rank_systems(std::span<const double> scores) {
  std::vector<double> negated(scores.begin(), scores.end());
  for (double& v : negated) v = -v;
  return average_ranks(negated);
}

CorrelationReport spearman(std::span<const double> xs, std::span<const double> ys) {
  check_inputs(xs, ys, "spearman");
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  CorrelationReport report;
  report.kind = CoefficientKind::spearman_rho;
  report.n = xs.size();
  report.coefficient = correlation(rx, ry, "spearman");
  if (report.n <= kExactSpearmanLimit) {
    std::vector<std::size_t> perm(report.n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> shuffled(report.n);
    std::size_t total = 0;
    std::size_t extreme = 0;
    do {
      for (std::size_t i = 0; i < perm.size(); ++i) shuffled[i] = ry[perm[i]];
      ++total;
      if (std::abs(correlation(rx, shuffled, "spearman")) >= std::abs(report.coefficient) - kTolerance) ++extreme;
    } while (std::next_permutation(perm.begin(), perm.end()));
    report.p_value = static_cast<double>(extreme) / static_cast<double>(total);
    report.method = "exact permutation (" + std::to_string(total) + " orderings, two-sided)";
  } else {
    report.p_value = t_test(report.coefficient, report.n);
    report.method = "t approximation, " + std::to_string(report.n - 2) + " df, two-sided";
  }
  return report;
}

CorrelationReport pearson(std::span<const double> xs, std::span<const double> ys) {
  check_inputs(xs, ys, "pearson");
  CorrelationReport report;
  report.kind = CoefficientKind::pearson_r;
  report.n = xs.size();
  report.coefficient = correlation(xs, ys, "pearson");
  report.p_value = t_test(report.coefficient, report.n);
  report.method = "t-test, " + std::to_string(report.n - 2) + " df, two-sided";
  return report;
}

CorrelationReport kendall_tau_partial(std::span<const PairJudgment> pairs, const PermutationOptions& options) {
  if (pairs.empty()) fail(ErrorKind::invalid_argument, "kendall_tau_partial: no comparable pairs");
  if (options.permutations == 0) fail(ErrorKind::invalid_argument, "kendall_tau_partial: need at least one permutation");

  CorrelationReport report;
  report.kind = CoefficientKind::kendall_tau;
  report.n = pairs.size();
  std::size_t reversed = 0;
  for (const PairJudgment& pair : pairs) {
    if (pair.higher < pair.lower) ++reversed;
    else if (pair.higher == pair.lower) ++report.ties;
  }
  const double p = static_cast<double>(pairs.size());
  report.discongruent = static_cast<double>(reversed) + 0.5 * static_cast<double>(report.ties);
  report.coefficient = 1.0 - 2.0 * report.discongruent / p;

  const std::size_t untied = pairs.size() - report.ties;
  const double threshold = std::abs(report.coefficient) - kTolerance;
  const std::size_t blocks = (options.permutations + kPermutationBlock - 1) / kPermutationBlock;
  std::vector<std::size_t> extreme(blocks, 0);
  parallel_for(blocks, options.workers, [&](std::size_t block) {
    Rng rng(derive_seed(options.seed, {fnv1a("kendall-sign-flip"), block}));
    const std::size_t begin = block * kPermutationBlock;
    const std::size_t end = std::min(options.permutations, begin + kPermutationBlock);
    std::size_t count = 0;
    for (std::size_t k = begin; k < end; ++k) {
      std::size_t flipped = 0;
      std::size_t left = untied;
      while (left >= 64) {
        flipped += static_cast<std::size_t>(std::popcount(rng()));
        left -= 64;
      }
      if (left > 0) flipped += static_cast<std::size_t>(std::popcount(rng() >> (64 - left)));
      const double d = static_cast<double>(flipped) + 0.5 * static_cast<double>(report.ties);
      if (std::abs(1.0 - 2.0 * d / p) >= threshold) ++count;
    }
    extreme[block] = count;
  });
  const std::size_t hits = std::accumulate(extreme.begin(), extreme.end(), std::size_t{0});
  report.p_value = static_cast<double>(1 + hits) / static_cast<double>(1 + options.permutations);
  report.method = "sign-flip permutation test, " + std::to_string(options.permutations) +
                  " permutations, ties count 1/2";
  return report;
}

}  // namespace gecval
