#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "egowsd/clustering.hpp"
#include "egowsd/feature_vector.hpp"
#include "egowsd/hypernymy.hpp"
#include "egowsd/thesaurus.hpp"
#include "egowsd/types.hpp"

namespace egowsd::senses {

/// A per-word sense, written `word#id`.
struct SenseRef {
  std::string word;
  std::size_t sense_id = 0;

  std::string str() const { return word + "#" + std::to_string(sense_id); }
  /// Parses `word#id`; throws Error on malformed input.
  static SenseRef parse(std::string_view text);

  friend bool operator==(const SenseRef&, const SenseRef&) = default;
  friend auto operator<=>(const SenseRef&, const SenseRef&) = default;
};

struct UsageExample {
  std::string sentence;
  double confidence = 0.0;

  friend bool operator==(const UsageExample&, const UsageExample&) = default;
};

struct SenseEntry {
  std::string word;
  std::size_t sense_id = 0;
  WeightedWords members;
  hypernymy::HypernymLabels hypernyms;
  FeatureVector cluster_vec;
  FeatureVector context_vec;  // empty when no member had a word vector
  std::vector<UsageExample> examples;

  SenseRef ref() const { return {word, sense_id}; }

  friend bool operator==(const SenseEntry&, const SenseEntry&) = default;
};

using Inventory = std::map<std::string, std::vector<SenseEntry>>;

struct SemanticClass {
  std::size_t class_id = 0;
  std::vector<SenseRef> member_senses;    // sorted
  std::vector<std::string> member_words;  // sorted, unique
  hypernymy::HypernymLabels hypernyms;
  FeatureVector cluster_vec;  // every member word with weight 1
  FeatureVector context_vec;

  friend bool operator==(const SemanticClass&, const SemanticClass&) = default;
};

/// Member words as features, weighted by similarity to the sense's word.
FeatureVector cluster_vector(const WeightedWords& members);

/// sum_u weight(u) * vec(u) over members that have a vector, capped to
/// `vec_cap` entries and L2-normalized. Zero when no member has a vector.
FeatureVector aggregate_context_vec(const cluster::SenseCluster& sense, const dt::WordVectors& word_vecs,
                                    std::size_t vec_cap);

SenseEntry make_entry(const cluster::SenseCluster& sense, const hypernymy::HypernymCounts& counts,
                      const dt::WordVectors& word_vecs, std::size_t k_hyper, std::size_t vec_cap);

/// One node per sense (`word#id`). Each cluster member u of sense s links
/// s to the sense of u whose cluster (plus u) overlaps most with s's
/// cluster (plus s's word); ties go to the smaller sense id. The edge weight
/// is u's weight in s, and parallel edges keep the maximum.
cluster::WeightedGraph build_sense_graph(const Inventory& inventory, std::size_t jobs = 1);

struct ClassParams {
  std::uint64_t seed = 42;
  std::size_t max_iter = 20;
  std::size_t min_class_size = 2;
  std::size_t k_hyper = 3;
  std::size_t vec_cap = 10000;
};

/// Global Chinese Whispers over the sense graph. Classes are numbered by
/// decreasing size (ties: smallest member sense first).
std::vector<SemanticClass> build_semantic_classes(const cluster::WeightedGraph& sense_graph,
                                                  const dt::WordVectors& word_vecs,
                                                  const hypernymy::HypernymCounts& counts, const ClassParams& params);

/// Class vectors and labels from its member senses.
SemanticClass make_class(std::size_t class_id, std::vector<SenseRef> member_senses, const dt::WordVectors& word_vecs,
                         const hypernymy::HypernymCounts& counts, std::size_t k_hyper, std::size_t vec_cap);

}  // namespace egowsd::senses
