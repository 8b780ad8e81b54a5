#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "egowsd/clustering.hpp"
#include "egowsd/corpus.hpp"
#include "egowsd/types.hpp"

namespace egowsd::hypernymy {

/// (hyponym, hypernym) frequencies keyed by hyponym.
class HypernymCounts {
 public:
  using Row = std::map<std::string, std::uint64_t>;

  void add(const std::string& hyponym, const std::string& hypernym, std::uint64_t n = 1);
  void merge(const HypernymCounts& other);

  std::uint64_t frequency(const std::string& hyponym, const std::string& hypernym) const;
  const std::map<std::string, Row>& by_hyponym() const noexcept { return rows_; }
  std::size_t size() const;
  bool empty() const noexcept { return rows_.empty(); }

  friend bool operator==(const HypernymCounts&, const HypernymCounts&) = default;

 private:
  std::map<std::string, Row> rows_;
};

/// One pattern hit with head words as they appear in the text.
struct PatternMatch {
  std::string hyponym;
  std::string hypernym;

  friend bool operator==(const PatternMatch&, const PatternMatch&) = default;
};

/// Applies the pattern set to a single sentence:
///   H such as X (, X)* ((and|or) X)?      such H as X ...
///   X (, X)* (and|or) other H             H including X ...
///   H especially X ...                    X is a H
/// Noun phrases are runs of at most three non-stopword alphabetic tokens
/// (head = last token); determiners are skipped. No singularization happens here.
std::vector<PatternMatch> match_patterns(const corpus::Sentence& sentence);

/// Strips a trailing "s" when the stripped form is in `vocabulary`.
std::string singularize(const std::string& word, const std::unordered_set<std::string>& vocabulary);

/// Mergeable extractor; singularization needs the vocabulary of the whole
/// corpus, so it is applied in finish().
class HearstExtractor {
 public:
  void add(const corpus::Sentence& sentence);
  void merge(const HearstExtractor& other);
  HypernymCounts finish() const;

 private:
  std::map<std::pair<std::string, std::string>, std::uint64_t> raw_;
  std::unordered_set<std::string> vocabulary_;
};

HypernymCounts extract_hypernym_pairs(std::span<const corpus::Sentence> sentences, std::size_t jobs = 1);

/// Ranked hypernyms: score descending, then word ascending.
using HypernymLabels = WeightedWords;

/// score(h) = sum over members u of weight(u) * freq(u, h); top `k_hyper`
/// labels with a positive score.
HypernymLabels label_sense(const cluster::SenseCluster& sense, const HypernymCounts& counts, std::size_t k_hyper);

/// Same scoring with every member weighted 1.
HypernymLabels label_class(const std::vector<std::string>& members, const HypernymCounts& counts,
                           std::size_t k_hyper);

}  // namespace egowsd::hypernymy
