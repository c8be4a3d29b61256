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

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gecval/corpus.hpp"
#include "gecval/rng.hpp"

namespace gecval {

/// Subset of one annotation's edits, bit i standing for edit i.
class EditSet {
 public:
  static constexpr std::size_t kMaxEdits = 64;

  constexpr EditSet() = default;
  constexpr explicit EditSet(std::uint64_t bits) : bits_(bits) {}
  static EditSet full(std::size_t n_edits);

  constexpr std::uint64_t bits() const noexcept { return bits_; }
  constexpr bool contains(std::size_t edit) const noexcept { return (bits_ >> edit) & 1U; }
  constexpr std::size_t size() const noexcept { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr bool subset_of(EditSet other) const noexcept { return (bits_ & ~other.bits_) == 0; }
  constexpr EditSet with(std::size_t edit) const noexcept { return EditSet(bits_ | (std::uint64_t{1} << edit)); }

  constexpr auto operator<=>(const EditSet&) const = default;

 private:
  std::uint64_t bits_ = 0;
};

/// Identifies the lattice of one (sentence, annotation) pair by position in
/// the corpus.
struct LatticeId {
  std::size_t record = 0;
  std::size_t annotation = 0;
  auto operator<=>(const LatticeId&) const = default;
};

struct CorrectionLattice {
  LatticeId id;
  std::size_t n_edits = 0;

  /// Throws a data error for annotations with more than EditSet::kMaxEdits edits.
  static CorrectionLattice of(const Corpus& corpus, LatticeId id);
};

struct Correction {
  LatticeId lattice;
  EditSet subset;
  bool operator==(const Correction&) const = default;
};

/// Subset order; throws when the corrections live on different lattices.
bool leq(const Correction& a, const Correction& b);

std::vector<Edit> select_edits(const Annotation& annotation, EditSet subset);
Tokens realize(const Corpus& corpus, const Correction& correction);

/// Applies edit `next` to `current`, the realization of `applied`, shifting
/// its span by the length changes of applied edits that precede it.
Tokens apply_next(const Annotation& annotation, EditSet applied, Tokens current, std::size_t next);

struct Chain {
  LatticeId lattice;
  std::vector<std::size_t> order;  // edit applied at each step
  std::vector<EditSet> nodes;      // order.size() + 1 nodes from {} to the full set
  std::size_t source = 0;          // index into nodes
};

/// min(n_ch, n_edits!) distinct chains, uniform over permutations, each with
/// a uniformly drawn source node.
std::vector<Chain> sample_chains(const CorrectionLattice& lattice, std::size_t n_ch, Rng& rng);

/// Distribution of the number of applied edits for a corpus model with mean
/// `expected_edits` and target variance 0.9: Binomial(n, M/n) with
/// n = max(1, round(M^2 / (M - 0.9))) for M > 0.9, Poisson(M) for
/// 0 < M <= 0.9, and the point mass at 0 for M = 0.
class EditCountDistribution {
 public:
  static constexpr double kTargetVariance = 0.9;

  explicit EditCountDistribution(double expected_edits);

  enum class Family { point, poisson, binomial };
  Family family() const noexcept { return family_; }
  std::size_t trials() const noexcept { return trials_; }
  double probability() const noexcept { return probability_; }
  double mean() const noexcept;
  double variance() const noexcept;

  /// Smallest k with CDF(k) > u, for u in [0, 1).
  std::size_t quantile(double u) const;
  std::size_t sample(Rng& rng) const { return quantile(rng.uniform01()); }

 private:
  Family family_ = Family::point;
  double lambda_ = 0.0;
  std::size_t trials_ = 0;
  double probability_ = 0.0;
};

struct CorpusModel {
  double expected_edits = 0.0;  // M
};

/// One correction per sentence for corpus model M: the first k edits of a
/// random edit order, k drawn from EditCountDistribution and clipped to the
/// annotation size. The per-sentence stream (annotation, quantile draw, edit
/// order) does not depend on M, so the corrections different models sample
/// for one sentence are always nested.
std::vector<Correction> sample_model_corpus(const Corpus& corpus, const CorpusModel& model, std::uint64_t seed,
                                            std::size_t repeat = 0);

/// One node per sentence, uniform over annotations and then over all subsets.
std::vector<Correction> sample_source_corpus(const Corpus& corpus, std::uint64_t seed, std::size_t repeat = 0);

/// Linear quality score: the original gets 1 - min_a |edits_a| / |tokens|
/// (floored at 0), the perfect correction 1, and nodes in between are
/// spaced by the number of applied edits.
double quality_score(const SentenceRecord& record, std::size_t annotation, EditSet subset);
double quality_score(const Corpus& corpus, const Correction& correction);

/// Nodes sampled from one lattice, e.g. one chain or the union of chains.
struct NodeGroup {
  LatticeId lattice;
  std::vector<EditSet> nodes;
};

struct ComparablePair {
  LatticeId lattice;
  std::size_t group = 0;  // first group the pair was found in
  EditSet lower;
  EditSet higher;
  bool operator==(const ComparablePair&) const = default;
};

/// Every pair of nodes within a group where one strictly contains the other,
/// deduplicated across groups by (lattice, lower, higher).
std::vector<ComparablePair> comparable_pairs(std::span<const NodeGroup> groups);

struct SingleEditPair {
  LatticeId lattice;
  std::size_t group = 0;
  EditSet lower;   // c'
  EditSet higher;  // c = c' plus one edit
  std::size_t edit = 0;
  bool operator==(const SingleEditPair&) const = default;
};

/// Pairs differing in exactly one edit, of type `etype`.
std::vector<SingleEditPair> single_edit_pairs(const Corpus& corpus, std::span<const NodeGroup> groups,
                                              std::string_view etype);
/// Every single-edit pair regardless of type.
std::vector<SingleEditPair> single_edit_pairs(std::span<const NodeGroup> groups);

}  // namespace gecval
