#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "egowsd/corpus.hpp"
#include "egowsd/feature_vector.hpp"

namespace egowsd::dt {

/// Word-by-feature co-occurrence counts with their marginals.
struct CooccurrenceCounts {
  std::unordered_map<std::string, std::unordered_map<std::string, std::uint64_t>> pairs;
  std::unordered_map<std::string, std::uint64_t> word_totals;
  std::unordered_map<std::string, std::uint64_t> feature_totals;
  std::uint64_t total = 0;

  std::uint64_t pair(const std::string& word, const std::string& feature) const;

  /// Builds counts (and marginals) from explicit (word, feature, count) cells.
  struct Cell {
    std::string word;
    std::string feature;
    std::uint64_t count;
  };
  static CooccurrenceCounts from_cells(const std::vector<Cell>& cells);
};

/// Mergeable accumulator over disjoint sentence ranges.
class CooccurrenceCounter {
 public:
  explicit CooccurrenceCounter(std::size_t window);

  void add(const corpus::Sentence& sentence);
  void merge(const CooccurrenceCounter& other);

  /// Drops words seen fewer than `min_word_freq` times from the word axis
  /// and recomputes marginals over what remains.
  CooccurrenceCounts finish(std::uint64_t min_word_freq) const;

  const std::unordered_map<std::string, std::uint64_t>& word_frequencies() const { return frequency_; }

 private:
  std::size_t window_;
  std::unordered_map<std::string, std::unordered_map<std::string, std::uint64_t>> pairs_;
  std::unordered_map<std::string, std::uint64_t> frequency_;
};

CooccurrenceCounts extract_cooccurrences(std::span<const corpus::Sentence> sentences, std::size_t window,
                                         std::uint64_t min_word_freq, std::size_t jobs = 1);

using WordVectors = std::map<std::string, FeatureVector>;

/// Lexicographer's mutual information: n_wf * log2(n_wf * N / (n_w * n_f)).
double lmi(std::uint64_t n_wf, std::uint64_t n_w, std::uint64_t n_f, std::uint64_t total);

/// LMI-weighted word vectors; non-positive weights are dropped, as are
/// words left without features.
WordVectors weight_lmi(const CooccurrenceCounts& counts, std::size_t jobs = 1);

/// Keeps the `p` highest-weight features per word.
WordVectors prune_features(const WordVectors& vectors, std::size_t p);

struct Neighbor {
  std::string word;
  double similarity = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Ranked neighbour lists: similarity descending, then word ascending. Words
/// without any neighbour are not stored.
class Thesaurus {
 public:
  using Lists = std::map<std::string, std::vector<Neighbor>>;

  Thesaurus() = default;
  explicit Thesaurus(Lists lists);

  const Lists& lists() const noexcept { return lists_; }
  bool contains(const std::string& word) const { return lists_.count(word) != 0; }
  std::size_t size() const noexcept { return lists_.size(); }

  /// Neighbour list of `word`; throws UnknownWordError.
  const std::vector<Neighbor>& neighbors(const std::string& word) const;

  /// Similarity of `neighbor` in `word`'s list, 0 when not listed.
  double similarity(const std::string& word, const std::string& neighbor) const;

  std::size_t row_count() const;

  friend bool operator==(const Thesaurus& a, const Thesaurus& b) { return a.lists_ == b.lists_; }

 private:
  Lists lists_;
  std::unordered_map<std::string, std::unordered_map<std::string, double>> lookup_;
};

/// Similarity is the number of retained features two words share; each
/// word keeps its `n_max` best neighbours with similarity >= 1.
Thesaurus build_thesaurus(const WordVectors& pruned, std::size_t n_max, std::size_t jobs = 1);

}  // namespace egowsd::dt
