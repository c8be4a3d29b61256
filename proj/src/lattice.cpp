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

#include "gecval/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

#include "gecval/error.hpp"

namespace gecval {

EditSet EditSet::full(std::size_t n_edits) {
  if (n_edits > kMaxEdits) fail(ErrorKind::data, "annotation has more than 64 edits");
  return EditSet(n_edits == kMaxEdits ? ~std::uint64_t{0} : (std::uint64_t{1} << n_edits) - 1);
}

CorrectionLattice CorrectionLattice::of(const Corpus& corpus, LatticeId id) {
  if (id.record >= corpus.size() || id.annotation >= corpus.records[id.record].annotations.size())
    fail(ErrorKind::invalid_argument, "no lattice for record " + std::to_string(id.record) + " annotation " +
                                          std::to_string(id.annotation));
  const std::size_t n = corpus.records[id.record].annotations[id.annotation].edits.size();
  if (n > EditSet::kMaxEdits)
    fail(ErrorKind::data, "sentence " + std::to_string(corpus.records[id.record].id) + " has an annotation with " +
                              std::to_string(n) + " edits (at most 64 supported)");
  return CorrectionLattice{id, n};
}

bool leq(const Correction& a, const Correction& b) {
  if (a.lattice != b.lattice) fail(ErrorKind::invalid_argument, "leq: corrections belong to different lattices");
  return a.subset.subset_of(b.subset);
}

std::vector<Edit> select_edits(const Annotation& annotation, EditSet subset) {
  std::vector<Edit> out;
  for (std::size_t i = 0; i < annotation.edits.size(); ++i)
    if (subset.contains(i)) out.push_back(annotation.edits[i]);
  return out;
}

Tokens realize(const Corpus& corpus, const Correction& correction) {
  const SentenceRecord& record = corpus.records.at(correction.lattice.record);
  const Annotation& annotation = record.annotations.at(correction.lattice.annotation);
  return apply_edits(record.tokens, select_edits(annotation, correction.subset));
}

Tokens apply_next(const Annotation& annotation, EditSet applied, Tokens current, std::size_t next) {
  if (next >= annotation.edits.size() || applied.contains(next))
    fail(ErrorKind::invalid_argument, "apply_next: edit " + std::to_string(next) + " unavailable");
  const Edit& edit = annotation.edits[next];
  std::ptrdiff_t shift = 0;
  for (std::size_t i = 0; i < annotation.edits.size(); ++i) {
    if (!applied.contains(i)) continue;
    const Edit& prior = annotation.edits[i];
    if (edit_before(prior, edit))
      shift += static_cast<std::ptrdiff_t>(prior.replacement.size()) -
               static_cast<std::ptrdiff_t>(prior.end - prior.start);
  }
  const auto begin = current.begin() + static_cast<std::ptrdiff_t>(edit.start) + shift;
  const auto it = current.erase(begin, begin + static_cast<std::ptrdiff_t>(edit.end - edit.start));
  current.insert(it, edit.replacement.begin(), edit.replacement.end());
  return current;
}

namespace {

Chain make_chain(LatticeId lattice, std::vector<std::size_t> order, Rng& rng) {
  Chain chain;
  chain.lattice = lattice;
  chain.nodes.reserve(order.size() + 1);
  EditSet node;
  chain.nodes.push_back(node);
  for (std::size_t e : order) {
    node = node.with(e);
    chain.nodes.push_back(node);
  }
  chain.order = std::move(order);
  chain.source = static_cast<std::size_t>(rng.below(chain.nodes.size()));
  return chain;
}

// n! when it does not exceed `cap`, otherwise any value > cap.
std::uint64_t factorial_capped(std::size_t n, std::uint64_t cap) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) {
    f *= i;
    if (f > cap) return f;
  }
  return f;
}

}  // namespace

std::vector<Chain> sample_chains(const CorrectionLattice& lattice, std::size_t n_ch, Rng& rng) {
  if (n_ch == 0) fail(ErrorKind::invalid_argument, "sample_chains: n_ch must be at least 1");
  std::vector<std::size_t> identity(lattice.n_edits);
  std::iota(identity.begin(), identity.end(), 0);

  std::vector<Chain> chains;
  if (factorial_capped(lattice.n_edits, n_ch) <= n_ch) {
    std::vector<std::size_t> order = identity;
    do {
      chains.push_back(make_chain(lattice.id, order, rng));
    } while (std::next_permutation(order.begin(), order.end()));
    return chains;
  }

  std::set<std::vector<std::size_t>> seen;
  while (chains.size() < n_ch) {
    std::vector<std::size_t> order = identity;
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    if (!seen.insert(order).second) continue;
    chains.push_back(make_chain(lattice.id, std::move(order), rng));
  }
  return chains;
}

EditCountDistribution::EditCountDistribution(double expected_edits) {
  if (!(expected_edits >= 0.0) || !std::isfinite(expected_edits))
    fail(ErrorKind::invalid_argument, "corpus model M must be a finite non-negative number");
  if (expected_edits == 0.0) {
    family_ = Family::point;
  } else if (expected_edits <= kTargetVariance) {
    family_ = Family::poisson;
    lambda_ = expected_edits;
  } else {
    family_ = Family::binomial;
    const double n = std::round(expected_edits * expected_edits / (expected_edits - kTargetVariance));
    trials_ = std::max<std::size_t>(1, static_cast<std::size_t>(n));
    probability_ = expected_edits / static_cast<double>(trials_);
  }
}

double EditCountDistribution::mean() const noexcept {
  switch (family_) {
    case Family::point: return 0.0;
    case Family::poisson: return lambda_;
    case Family::binomial: return static_cast<double>(trials_) * probability_;
  }
  return 0.0;
}

double EditCountDistribution::variance() const noexcept {
  switch (family_) {
    case Family::point: return 0.0;
    case Family::poisson: return lambda_;
    case Family::binomial: return static_cast<double>(trials_) * probability_ * (1.0 - probability_);
  }
  return 0.0;
}

std::size_t EditCountDistribution::quantile(double u) const {
  if (family_ == Family::point) return 0;
  if (family_ == Family::poisson) {
    double pmf = std::exp(-lambda_);
    double cdf = pmf;
    std::size_t k = 0;
    while (cdf <= u && k < 10000) {
      ++k;
      pmf *= lambda_ / static_cast<double>(k);
      cdf += pmf;
    }
    return k;
  }
  // Binomial: walk the pmf upward from k = 0.
  const double p = probability_;
  const std::size_t n = trials_;
  if (p >= 1.0) return n;
  double pmf = std::pow(1.0 - p, static_cast<double>(n));
  double cdf = pmf;
  std::size_t k = 0;
  while (cdf <= u && k < n) {
    pmf *= static_cast<double>(n - k) / static_cast<double>(k + 1) * p / (1.0 - p);
    ++k;
    cdf += pmf;
  }
  return k;
}

std::vector<Correction> sample_model_corpus(const Corpus& corpus, const CorpusModel& model, std::uint64_t seed,
                                            std::size_t repeat) {
  const EditCountDistribution counts(model.expected_edits);
  static const std::uint64_t kTag = fnv1a("model-corpus");
  std::vector<Correction> out;
  out.reserve(corpus.size());
  for (std::size_t r = 0; r < corpus.size(); ++r) {
    const SentenceRecord& record = corpus.records[r];
    if (record.annotations.empty()) fail(ErrorKind::data, "sentence " + std::to_string(record.id) + " has no annotation");
    Rng rng(derive_seed(seed, {record.id, kTag, repeat}));
    const std::size_t a = static_cast<std::size_t>(rng.below(record.annotations.size()));
    const CorrectionLattice lattice = CorrectionLattice::of(corpus, {r, a});
    const double u = rng.uniform01();
    std::vector<std::size_t> order(lattice.n_edits);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

    const std::size_t k = std::min(counts.quantile(u), lattice.n_edits);
    EditSet subset;
    for (std::size_t i = 0; i < k; ++i) subset = subset.with(order[i]);
    out.push_back(Correction{lattice.id, subset});
  }
  return out;
}

std::vector<Correction> sample_source_corpus(const Corpus& corpus, std::uint64_t seed, std::size_t repeat) {
  static const std::uint64_t kTag = fnv1a("source-corpus");
  std::vector<Correction> out;
  out.reserve(corpus.size());
  for (std::size_t r = 0; r < corpus.size(); ++r) {
    const SentenceRecord& record = corpus.records[r];
    if (record.annotations.empty()) fail(ErrorKind::data, "sentence " + std::to_string(record.id) + " has no annotation");
    Rng rng(derive_seed(seed, {record.id, kTag, repeat}));
    const std::size_t a = static_cast<std::size_t>(rng.below(record.annotations.size()));
    const CorrectionLattice lattice = CorrectionLattice::of(corpus, {r, a});
    EditSet subset;
    for (std::size_t i = 0; i < lattice.n_edits; ++i)
      if (rng.coin()) subset = subset.with(i);
    out.push_back(Correction{lattice.id, subset});
  }
  return out;
}

double quality_score(const SentenceRecord& record, std::size_t annotation, EditSet subset) {
  const std::size_t n = record.annotations.at(annotation).edits.size();
  const std::size_t k = subset.size();
  if (k >= n) return 1.0;
  double original = 0.0;
  if (!record.tokens.empty())
    original = std::max(0.0, 1.0 - static_cast<double>(record.min_edit_count()) /
                                       static_cast<double>(record.tokens.size()));
  return original + static_cast<double>(k) * (1.0 - original) / static_cast<double>(n);
}

double quality_score(const Corpus& corpus, const Correction& correction) {
  return quality_score(corpus.records.at(correction.lattice.record), correction.lattice.annotation, correction.subset);
}

namespace {

std::vector<EditSet> unique_nodes(const std::vector<EditSet>& nodes) {
  std::vector<EditSet> out;
  for (EditSet n : nodes)
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  return out;
}

// Calls visit(group index, lower, higher) once per (lattice, lower, higher)
// with lower a strict subset of higher.
template <typename Visit>
void for_each_comparable(std::span<const NodeGroup> groups, Visit&& visit) {
  std::set<std::tuple<LatticeId, EditSet, EditSet>> seen;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const std::vector<EditSet> nodes = unique_nodes(groups[g].nodes);
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        if (i == j || !nodes[i].subset_of(nodes[j])) continue;
        if (!seen.emplace(groups[g].lattice, nodes[i], nodes[j]).second) continue;
        visit(g, nodes[i], nodes[j]);
      }
  }
}

}  // namespace

std::vector<ComparablePair> comparable_pairs(std::span<const NodeGroup> groups) {
  std::vector<ComparablePair> out;
  for_each_comparable(groups, [&](std::size_t g, EditSet lower, EditSet higher) {
    out.push_back(ComparablePair{groups[g].lattice, g, lower, higher});
  });
  return out;
}

std::vector<SingleEditPair> single_edit_pairs(std::span<const NodeGroup> groups) {
  std::vector<SingleEditPair> out;
  for_each_comparable(groups, [&](std::size_t g, EditSet lower, EditSet higher) {
    const std::uint64_t diff = higher.bits() & ~lower.bits();
    if (std::popcount(diff) != 1) return;
    out.push_back(SingleEditPair{groups[g].lattice, g, lower, higher, static_cast<std::size_t>(std::countr_zero(diff))});
  });
  return out;
}

std::vector<SingleEditPair> single_edit_pairs(const Corpus& corpus, std::span<const NodeGroup> groups,
                                              std::string_view etype) {
  std::vector<SingleEditPair> out;
  for (SingleEditPair& p : single_edit_pairs(groups)) {
    const Edit& e = corpus.records.at(p.lattice.record).annotations.at(p.lattice.annotation).edits.at(p.edit);
    if (e.etype == etype) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace gecval
