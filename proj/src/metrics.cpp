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

#include "gecval/metrics.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>

#include "gecval/align.hpp"
#include "gecval/corpus.hpp"
#include "gecval/error.hpp"
#include "gecval/grammar.hpp"
#include "gecval/rng.hpp"

namespace gecval {

namespace {

constexpr std::array kMetrics = {MetricId::bleu,     MetricId::gleu,           MetricId::ibleu,
                                 MetricId::sari,     MetricId::max_sari,       MetricId::f_half,
                                 MetricId::min_ld_to_refs, MetricId::ld_to_source, MetricId::grammaticality};

using Counts = std::map<std::string, int>;

Counts ngram_counts(const Tokens& tokens, std::size_t n) {
  Counts out;
  if (tokens.size() < n) return out;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (std::size_t k = 1; k < n; ++k) {
      key += '\x1f';
      key += tokens[i + k];
    }
    ++out[key];
  }
  return out;
}

int count_of(const Counts& counts, const std::string& key) {
  auto it = counts.find(key);
  return it == counts.end() ? 0 : it->second;
}

void require_references(std::span<const std::string> references, std::string_view metric) {
  if (references.empty()) fail(ErrorKind::invalid_argument, std::string(metric) + ": empty reference list");
}

std::vector<Tokens> tokenize_all(std::span<const std::string> texts) {
  std::vector<Tokens> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(tokenize(t));
  return out;
}

std::string lowercase(std::string s) {
  for (char& c : s)
    if (static_cast<unsigned char>(c) < 0x80) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// F1 with the empty-set conventions used by SARI: nothing proposed and
// nothing required is perfect, exactly one empty side scores 0.
double f1(double good, double proposed, double required) {
  if (proposed == 0.0 && required == 0.0) return 1.0;
  if (proposed == 0.0 || required == 0.0) return 0.0;
  const double p = good / proposed;
  const double r = good / required;
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

}  // namespace

std::string_view metric_name(MetricId id) noexcept {
  switch (id) {
    case MetricId::bleu: return "bleu";
    case MetricId::gleu: return "gleu";
    case MetricId::ibleu: return "ibleu";
    case MetricId::sari: return "sari";
    case MetricId::max_sari: return "max_sari";
    case MetricId::f_half: return "f_half";
    case MetricId::min_ld_to_refs: return "min_ld";
    case MetricId::ld_to_source: return "ld_source";
    case MetricId::grammaticality: return "lt";
  }
  return "?";
}

std::optional<MetricId> metric_from_name(std::string_view name) noexcept {
  for (MetricId id : kMetrics)
    if (metric_name(id) == name) return id;
  if (name == "m2" || name == "f0.5") return MetricId::f_half;
  if (name == "grammaticality") return MetricId::grammaticality;
  return std::nullopt;
}

std::span<const MetricId> all_metrics() noexcept { return kMetrics; }

bool uses_references(MetricId id) noexcept {
  return id != MetricId::ld_to_source && id != MetricId::grammaticality;
}

void MetricConfig::validate() const {
  if (ngram_order == 0) fail(ErrorKind::invalid_argument, "n-gram order must be at least 1");
  if (bleu_smoothing != 3) fail(ErrorKind::invalid_argument, "only BLEU smoothing method 3 is supported");
  if (!(ibleu_alpha >= 0.0 && ibleu_alpha <= 1.0)) fail(ErrorKind::invalid_argument, "iBLEU alpha must lie in [0, 1]");
  if (gleu_iterations == 0) fail(ErrorKind::invalid_argument, "GLEU iterations must be at least 1");
}

double bleu(std::string_view candidate, std::span<const std::string> references, const MetricConfig& config) {
  require_references(references, "bleu");
  const Tokens hyp = tokenize(candidate);
  const std::vector<Tokens> refs = tokenize_all(references);
  const std::size_t order = config.ngram_order;

  std::vector<int> numerators(order), denominators(order);
  for (std::size_t n = 1; n <= order; ++n) {
    const Counts counts = ngram_counts(hyp, n);
    Counts max_ref;
    for (const Tokens& ref : refs)
      for (const auto& [g, c] : ngram_counts(ref, n)) max_ref[g] = std::max(max_ref[g], c);
    int clipped = 0;
    int total = 0;
    for (const auto& [g, c] : counts) {
      clipped += std::min(c, count_of(max_ref, g));
      total += c;
    }
    numerators[n - 1] = clipped;
    denominators[n - 1] = std::max(1, total);
  }
  if (numerators[0] == 0) return 0.0;

  // Closest reference length, ties to the shorter one.
  const auto c = static_cast<long long>(hyp.size());
  long long r = static_cast<long long>(refs.front().size());
  for (const Tokens& ref : refs) {
    const auto len = static_cast<long long>(ref.size());
    if (std::llabs(len - c) < std::llabs(r - c) || (std::llabs(len - c) == std::llabs(r - c) && len < r)) r = len;
  }
  double bp = 1.0;
  if (c <= r) bp = c == 0 ? 0.0 : std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c));

  double log_sum = 0.0;
  int zeros = 0;
  for (std::size_t n = 0; n < order; ++n) {
    double p;
    if (numerators[n] == 0) {
      ++zeros;
      p = 1.0 / (std::ldexp(1.0, zeros) * denominators[n]);
    } else {
      p = static_cast<double>(numerators[n]) / denominators[n];
    }
    log_sum += std::log(p) / static_cast<double>(order);
  }
  return bp * std::exp(log_sum);
}

double gleu_single(std::string_view source, std::string_view candidate, std::string_view reference, std::size_t order) {
  const Tokens src = tokenize(source);
  const Tokens hyp = tokenize(candidate);
  const Tokens ref = tokenize(reference);

  // Statistics: c, r, then (numerator, denominator) per order. Zeros are
  // smoothed to 1 as sentence-level GLEU does.
  auto smooth = [](double x) { return x == 0.0 ? 1.0 : x; };
  const double c = smooth(static_cast<double>(hyp.size()));
  const double r = smooth(static_cast<double>(ref.size()));
  double log_prec = 0.0;
  for (std::size_t n = 1; n <= order; ++n) {
    const Counts h = ngram_counts(hyp, n);
    const Counts s = ngram_counts(src, n);
    const Counts rf = ngram_counts(ref, n);
    long long matched = 0;
    long long penalized = 0;
    for (const auto& [g, count] : h) {
      matched += std::min(count, count_of(rf, g));
      // n-grams of the source that the reference changed
      if (!rf.contains(g)) penalized += std::min(count, count_of(s, g));
    }
    const double numerator = smooth(static_cast<double>(std::max(0LL, matched - penalized)));
    const double denominator =
        smooth(static_cast<double>(std::max<long long>(0, static_cast<long long>(hyp.size()) + 1 - static_cast<long long>(n))));
    log_prec += std::log(numerator / denominator);
  }
  return std::exp(std::min(0.0, 1.0 - r / c) + log_prec / static_cast<double>(order));
}

double gleu(std::string_view source, std::string_view candidate, std::span<const std::string> references,
            const MetricConfig& config, std::uint64_t stream) {
  require_references(references, "gleu");
  if (references.size() == 1) return gleu_single(source, candidate, references.front(), config.ngram_order);

  std::vector<std::size_t> draws(references.size(), 0);
  Rng rng(derive_seed(config.seed, {stream, fnv1a("gleu-references")}));
  for (std::size_t i = 0; i < config.gleu_iterations; ++i) ++draws[rng.below(references.size())];
  double total = 0.0;
  for (std::size_t k = 0; k < references.size(); ++k)
    if (draws[k]) total += static_cast<double>(draws[k]) * gleu_single(source, candidate, references[k], config.ngram_order);
  return total / static_cast<double>(config.gleu_iterations);
}

double ibleu(std::string_view source, std::string_view candidate, std::span<const std::string> references,
             const MetricConfig& config) {
  const std::string src(source);
  return config.ibleu_alpha * bleu(candidate, references, config) -
         (1.0 - config.ibleu_alpha) * bleu(candidate, std::span<const std::string>(&src, 1), config);
}

double f_half_from_counts(const EditCounts& counts) {
  if (counts.system == 0 && counts.gold == 0) return 1.0;
  if (counts.system == 0 || counts.gold == 0) return 0.0;
  const double p = static_cast<double>(counts.matched) / static_cast<double>(counts.system);
  const double r = static_cast<double>(counts.matched) / static_cast<double>(counts.gold);
  if (p == 0.0 && r == 0.0) return 0.0;
  return 1.25 * p * r / (0.25 * p + r);
}

double f_half(std::string_view source, std::string_view candidate, std::span<const std::string> references) {
  require_references(references, "f_half");
  const Tokens src = tokenize(source);
  auto keyed = [](const std::vector<Edit>& edits) {
    std::vector<std::tuple<std::size_t, std::size_t, std::string>> keys;
    for (const Edit& e : edits) keys.emplace_back(e.start, e.end, lowercase(detokenize(e.replacement)));
    std::sort(keys.begin(), keys.end());
    return keys;
  };
  const auto system = keyed(extract_edits(src, tokenize(candidate)));
  double best = 0.0;
  for (const std::string& reference : references) {
    const auto gold = keyed(extract_edits(src, tokenize(reference)));
    EditCounts counts{system.size(), gold.size(), 0};
    std::vector<std::tuple<std::size_t, std::size_t, std::string>> common;
    std::set_intersection(system.begin(), system.end(), gold.begin(), gold.end(), std::back_inserter(common));
    counts.matched = common.size();
    best = std::max(best, f_half_from_counts(counts));
  }
  return best;
}

double sari(std::string_view source, std::string_view candidate, std::span<const std::string> references,
            std::size_t order) {
  require_references(references, "sari");
  const Tokens src = tokenize(source);
  const Tokens out = tokenize(candidate);
  const std::vector<Tokens> refs = tokenize_all(references);
  const double k = static_cast<double>(refs.size());

  double keep_total = 0.0, del_total = 0.0, add_total = 0.0;
  for (std::size_t n = 1; n <= order; ++n) {
    const Counts s = ngram_counts(src, n);
    const Counts o = ngram_counts(out, n);
    std::vector<Counts> rs;
    for (const Tokens& r : refs) rs.push_back(ngram_counts(r, n));

    double keep_good = 0, keep_sys = 0, keep_ref = 0;
    double del_good = 0, del_sys = 0, del_ref = 0;
    for (const auto& [g, i] : s) {
      const int oc = count_of(o, g);
      double kept_ref = 0.0, deleted_ref = 0.0;
      for (const Counts& r : rs) {
        const int rc = count_of(r, g);
        kept_ref += std::min(i, rc);
        deleted_ref += std::max(i - rc, 0);
      }
      kept_ref /= k;
      deleted_ref /= k;
      const double kept_sys = std::min(i, oc);
      const double deleted_sys = std::max(i - oc, 0);
      keep_good += std::min(kept_sys, kept_ref);
      keep_sys += kept_sys;
      keep_ref += kept_ref;
      del_good += std::min(deleted_sys, deleted_ref);
      del_sys += deleted_sys;
      del_ref += deleted_ref;
    }

    double add_good = 0, add_sys = 0, add_ref = 0;
    std::map<std::string, bool> ref_added;
    for (const Counts& r : rs)
      for (const auto& [g, rc] : r)
        if (!s.contains(g)) ref_added[g] = true;
    add_ref = static_cast<double>(ref_added.size());
    for (const auto& [g, oc] : o) {
      if (s.contains(g)) continue;
      add_sys += 1;
      if (ref_added.contains(g)) add_good += 1;
    }

    keep_total += f1(keep_good, keep_sys, keep_ref);
    add_total += f1(add_good, add_sys, add_ref);
    if (del_sys == 0.0) del_total += del_ref == 0.0 ? 1.0 : 0.0;
    else del_total += del_good / del_sys;
  }
  const double n = static_cast<double>(order);
  return (keep_total / n + del_total / n + add_total / n) / 3.0;
}

double max_sari(std::string_view source, std::string_view candidate, std::span<const std::string> references,
                std::size_t order) {
  require_references(references, "max_sari");
  double best = 0.0;
  for (const std::string& r : references)
    best = std::max(best, sari(source, candidate, std::span<const std::string>(&r, 1), order));
  return best;
}

double min_ld_to_refs(std::string_view candidate, std::span<const std::string> references) {
  require_references(references, "min_ld");
  std::optional<double> best;
  for (const std::string& r : references) {
    if (r.empty()) continue;
    const double s = lev_similarity(candidate, r);
    if (!best || s > *best) best = s;
  }
  if (!best) fail(ErrorKind::invalid_argument, "min_ld: every reference is empty");
  return *best;
}

double ld_to_source(std::string_view source, std::string_view candidate) { return lev_similarity(source, candidate); }

double grammaticality_from_count(std::size_t errors, std::size_t tokens) noexcept {
  if (tokens == 0) return errors == 0 ? 1.0 : 0.0;
  return std::max(0.0, 1.0 - static_cast<double>(errors) / static_cast<double>(tokens));
}

double grammaticality(std::string_view candidate, GrammarChecker& checker) {
  const CheckResult result = checker.check(candidate);
  return grammaticality_from_count(result.error_count, tokenize(candidate).size());
}

double score(MetricId id, const EvalInput& input, const MetricConfig& config, GrammarChecker* checker) {
  switch (id) {
    case MetricId::bleu: return bleu(input.candidate, input.references, config);
    case MetricId::gleu: return gleu(input.source, input.candidate, input.references, config, input.stream);
    case MetricId::ibleu: return ibleu(input.source, input.candidate, input.references, config);
    case MetricId::sari: return sari(input.source, input.candidate, input.references, config.ngram_order);
    case MetricId::max_sari: return max_sari(input.source, input.candidate, input.references, config.ngram_order);
    case MetricId::f_half: return f_half(input.source, input.candidate, input.references);
    case MetricId::min_ld_to_refs: return min_ld_to_refs(input.candidate, input.references);
    case MetricId::ld_to_source: return ld_to_source(input.source, input.candidate);
    case MetricId::grammaticality:
      if (!checker) fail(ErrorKind::invalid_argument, "grammaticality needs a grammar checker");
      return grammaticality(input.candidate, *checker);
  }
  fail(ErrorKind::invalid_argument, "unknown metric");
}

double corpus_score(MetricId id, std::span<const EvalInput> inputs, const MetricConfig& config,
                    GrammarChecker* checker) {
  if (inputs.empty()) fail(ErrorKind::invalid_argument, "corpus_score: empty corpus");
  double total = 0.0;
  for (const EvalInput& in : inputs) total += score(id, in, config, checker);
  return total / static_cast<double>(inputs.size());
}

}  // namespace gecval
