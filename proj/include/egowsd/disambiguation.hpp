#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "egowsd/corpus.hpp"
#include "egowsd/feature_vector.hpp"
#include "egowsd/model.hpp"

namespace egowsd::wsd {

enum class InventoryKind { words, super };
enum class FeatureKind { cluster, context, mfs, random };

/// One of the disambiguation models served from a model directory, written
/// `<inventory>-<features>`, e.g. `words-context` or `super-mfs`.
struct ModelId {
  InventoryKind inventory = InventoryKind::words;
  FeatureKind features = FeatureKind::context;

  std::string str() const;
  /// Accepts `<inventory>-<features>`; throws Error otherwise.
  static ModelId parse(std::string_view text);
  static ModelId make(std::string_view inventory, std::string_view features);

  friend bool operator==(const ModelId&, const ModelId&) = default;
};

std::string to_string(InventoryKind kind);
std::string to_string(FeatureKind kind);

/// A candidate: a word sense (`jaguar#1`) or a semantic class (`class#4`).
struct Candidate {
  InventoryKind kind = InventoryKind::words;
  std::string word;  // empty for classes
  std::size_t id = 0;

  std::string str() const;
  static Candidate parse(std::string_view text);

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct CommonFeature {
  std::string feature;
  double context_weight = 0.0;
  double sense_weight = 0.0;

  friend bool operator==(const CommonFeature&, const CommonFeature&) = default;
};

struct RankedSense {
  Candidate sense;
  double score = 0.0;
  std::vector<CommonFeature> common_features;  // by contribution, descending

  friend bool operator==(const RankedSense&, const RankedSense&) = default;
};

struct Prediction {
  std::string word;
  ModelId model_id;
  std::vector<RankedSense> ranked;
  double confidence = 0.0;  // top-1 minus top-2 score
  bool fallback_used = false;

  const RankedSense& best() const { return ranked.front(); }

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

struct Annotation {
  std::size_t token_index = 0;
  corpus::Span span;  // byte offsets into the annotated text
  std::string word;
  Prediction prediction;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

/// Bag of content tokens other than the target, L2-normalized.
FeatureVector featurize_context(const corpus::Sentence& sentence, std::optional<std::size_t> target_index);

/// Cosine similarity, 0 for zero vectors.
double score(const FeatureVector& context, const FeatureVector& sense_vec);

/// First token whose norm equals the folded `word`.
std::optional<std::size_t> find_target(const corpus::Sentence& sentence, const std::string& word);

/// Tokenizes `text` as one sentence.
corpus::Sentence make_sentence(std::string_view text, const corpus::StopwordList& stopwords);

/// Vector a candidate is scored with under `features` (cluster or context).
const FeatureVector& candidate_vector(const Model& model, const Candidate& candidate, FeatureKind features);

/// Ranks all candidates of `word` under `model_id`. Per-word inventories
/// need the word to have senses (UnknownWordError otherwise); the super
/// inventory ranks every semantic class. When no candidate scores above
/// zero the most-frequent candidate is returned with fallback_used set.
/// `seed` only matters for the random baseline.
Prediction disambiguate(const std::string& word, const corpus::Sentence& sentence,
                        std::optional<std::size_t> target_index, const ModelId& model_id, const Model& model,
                        std::uint64_t seed = 0);

Prediction disambiguate(const std::string& word, std::string_view context, const ModelId& model_id,
                        const Model& model, std::uint64_t seed = 0);

/// Disambiguates every detected target in `text`; targets unknown to a
/// per-word inventory are skipped.
std::vector<Annotation> disambiguate_all(std::string_view text, const ModelId& model_id, const Model& model);

Prediction mfs_predict(const std::string& word, InventoryKind inventory, const Model& model);
Prediction random_predict(const std::string& word, InventoryKind inventory, const Model& model, std::uint64_t seed);

/// Cluster members whose word vector carries `feature`, heaviest first.
WeightedWords trace_feature(const Candidate& sense, const std::string& feature, const Model& model);

/// Hypernym labels of a candidate.
const hypernymy::HypernymLabels& candidate_hypernyms(const Model& model, const Candidate& candidate);

/// Per-sense usage examples for `word`: each sentence is disambiguated with
/// the words-context model and assigned to its top sense; fallback
/// predictions are discarded. Keeps the `k` most confident sentences per
/// sense (earlier sentences first on equal confidence).
std::map<std::size_t, std::vector<senses::UsageExample>> extract_usage_examples(
    const std::string& word, std::span<const corpus::Sentence* const> sentences, const Model& model, std::size_t k);

/// Runs example extraction for every word with senses over the corpus and
/// stores the result in `data`.
void attach_usage_examples(ModelData& data, std::span<const corpus::Sentence> corpus, std::size_t k,
                           std::size_t jobs = 1);

}  // namespace egowsd::wsd
