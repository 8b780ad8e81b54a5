#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "egowsd/corpus.hpp"
#include "egowsd/hypernymy.hpp"
#include "egowsd/senses.hpp"
#include "egowsd/thesaurus.hpp"

namespace egowsd {

/// Every tunable of the induction pipeline. Serialized verbatim into the
/// model manifest.
struct PipelineConfig {
  std::size_t window = 3;
  std::uint64_t min_word_freq = 5;
  std::size_t p = 100;  // features kept per word
  std::size_t n_max = 200;
  std::size_t n_ego = 200;
  std::size_t n_inner = 50;
  std::size_t max_iter = 20;
  std::size_t min_cluster_size = 2;
  std::size_t min_class_size = 2;
  std::size_t k_hyper = 3;
  std::size_t vec_cap = 10000;
  std::size_t k_examples = 5;
  std::uint64_t seed = 42;
  corpus::DocumentMode doc_mode = corpus::DocumentMode::file;

  /// Checks documented ranges; throws Error naming the offending key.
  void validate() const;

  std::vector<std::pair<std::string, std::string>> to_pairs() const;

  /// Applies `key`/`value` pairs over the defaults. Unknown keys and
  /// unparsable values throw Error.
  static PipelineConfig from_pairs(const std::vector<std::pair<std::string, std::string>>& pairs);

  /// Reads `key<TAB>value` or `key=value` lines (`#` comments allowed).
  static PipelineConfig from_file(const std::string& path);

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

struct CorpusStats {
  std::uint64_t documents = 0;
  std::uint64_t sentences = 0;
  std::uint64_t tokens = 0;

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

/// The complete induced model as plain values.
struct ModelData {
  PipelineConfig config;
  CorpusStats stats;
  dt::Thesaurus thesaurus;
  dt::WordVectors word_vectors;
  senses::Inventory inventory;
  std::vector<senses::SemanticClass> classes;
  hypernymy::HypernymCounts hearst;

  std::size_t sense_count() const;

  friend bool operator==(const ModelData&, const ModelData&) = default;
};

/// Immutable, indexed view over ModelData; safe to share across threads.
class Model {
 public:
  Model() = default;
  explicit Model(ModelData data);

  const ModelData& data() const { return *data_; }
  bool loaded() const { return data_ != nullptr; }

  /// Senses of `word`, or nullptr.
  const std::vector<senses::SenseEntry>* find_senses(const std::string& word) const;
  /// Throws NotFoundError.
  const std::vector<senses::SenseEntry>& senses_of(const std::string& word) const;
  const senses::SenseEntry& sense(const senses::SenseRef& ref) const;

  const senses::SemanticClass& class_by_id(std::size_t class_id) const;
  /// Ids of classes containing any sense of `word`.
  const std::vector<std::size_t>& classes_of(const std::string& word) const;

  /// Word vector, or nullptr.
  const FeatureVector* word_vector(const std::string& word) const;

  /// Words with induced senses.
  const std::unordered_set<std::string>& vocabulary() const { return vocabulary_; }
  const corpus::StopwordList& stopwords() const { return *stopwords_; }

 private:
  std::shared_ptr<const ModelData> data_;
  std::unordered_map<std::string, const std::vector<senses::SenseEntry>*> senses_;
  std::unordered_map<std::string, const FeatureVector*> vectors_;
  std::unordered_map<std::string, std::vector<std::size_t>> classes_of_;
  std::unordered_set<std::string> vocabulary_;
  std::shared_ptr<const corpus::StopwordList> stopwords_ = corpus::StopwordList::builtin();
};

}  // namespace egowsd
