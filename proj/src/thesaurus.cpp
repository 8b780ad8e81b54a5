#include "egowsd/thesaurus.hpp"

#include <algorithm>
#include <cmath>

#include "egowsd/errors.hpp"
#include "egowsd/parallel.hpp"

namespace egowsd::dt {

std::uint64_t CooccurrenceCounts::pair(const std::string& word, const std::string& feature) const {
  auto w = pairs.find(word);
  if (w == pairs.end()) return 0;
  auto f = w->second.find(feature);
  return f == w->second.end() ? 0 : f->second;
}

CooccurrenceCounts CooccurrenceCounts::from_cells(const std::vector<Cell>& cells) {
  CooccurrenceCounts out;
  for (const auto& cell : cells) {
    if (cell.count == 0) continue;
    out.pairs[cell.word][cell.feature] += cell.count;
    out.word_totals[cell.word] += cell.count;
    out.feature_totals[cell.feature] += cell.count;
    out.total += cell.count;
  }
  return out;
}

CooccurrenceCounter::CooccurrenceCounter(std::size_t window) : window_(window) {
  if (window == 0) throw Error("co-occurrence window must be >= 1");
}

void CooccurrenceCounter::add(const corpus::Sentence& sentence) {
  std::vector<const std::string*> content;
  content.reserve(sentence.tokens.size());
  for (const auto& token : sentence.tokens) {
    if (corpus::is_content(token)) content.push_back(&token.norm);
  }
  for (std::size_t i = 0; i < content.size(); ++i) {
    const std::string& word = *content[i];
    ++frequency_[word];
    auto& row = pairs_[word];
    std::size_t lo = i >= window_ ? i - window_ : 0;
    std::size_t hi = std::min(content.size() - 1, i + window_);
    for (std::size_t j = lo; j <= hi; ++j) {
      if (j == i || *content[j] == word) continue;
      ++row[*content[j]];
    }
  }
}

void CooccurrenceCounter::merge(const CooccurrenceCounter& other) {
  for (const auto& [word, row] : other.pairs_) {
    auto& mine = pairs_[word];
    for (const auto& [feature, n] : row) mine[feature] += n;
  }
  for (const auto& [word, n] : other.frequency_) frequency_[word] += n;
}

CooccurrenceCounts CooccurrenceCounter::finish(std::uint64_t min_word_freq) const {
  CooccurrenceCounts out;
  for (const auto& [word, row] : pairs_) {
    auto freq = frequency_.find(word);
    if (freq == frequency_.end() || freq->second < min_word_freq) continue;
    std::uint64_t word_total = 0;
    for (const auto& [feature, n] : row) {
      word_total += n;
      out.feature_totals[feature] += n;
    }
    if (word_total == 0) continue;
    out.pairs.emplace(word, row);
    out.word_totals[word] = word_total;
    out.total += word_total;
  }
  return out;
}

CooccurrenceCounts extract_cooccurrences(std::span<const corpus::Sentence> sentences, std::size_t window,
                                         std::uint64_t min_word_freq, std::size_t jobs) {
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, sentences.size() / 256));
  std::vector<CooccurrenceCounter> shards(jobs, CooccurrenceCounter(window));
  std::size_t chunk = (sentences.size() + jobs - 1) / jobs;
  parallel_for(jobs, jobs, [&](std::size_t shard) {
    std::size_t begin = shard * chunk;
    std::size_t end = std::min(sentences.size(), begin + chunk);
    for (std::size_t i = begin; i < end; ++i) shards[shard].add(sentences[i]);
  });
  for (std::size_t shard = 1; shard < shards.size(); ++shard) shards[0].merge(shards[shard]);
  return shards[0].finish(min_word_freq);
}

double lmi(std::uint64_t n_wf, std::uint64_t n_w, std::uint64_t n_f, std::uint64_t total) {
  if (n_wf == 0 || n_w == 0 || n_f == 0 || total == 0) return 0.0;
  double count = static_cast<double>(n_wf);
  double ratio = (count * static_cast<double>(total)) / (static_cast<double>(n_w) * static_cast<double>(n_f));
  return count * std::log2(ratio);
}

WordVectors weight_lmi(const CooccurrenceCounts& counts, std::size_t jobs) {
  if (counts.total == 0) throw Error("cannot weight empty co-occurrence counts");
  std::vector<const std::string*> words;
  words.reserve(counts.pairs.size());
  for (const auto& [word, _] : counts.pairs) words.push_back(&word);
  std::sort(words.begin(), words.end(), [](auto* a, auto* b) { return *a < *b; });

  std::vector<FeatureVector> vectors(words.size());
  parallel_for(words.size(), jobs, [&](std::size_t i) {
    const auto& word = *words[i];
    const auto& row = counts.pairs.at(word);
    const std::uint64_t n_w = counts.word_totals.at(word);
    std::vector<FeatureVector::Entry> entries;
    entries.reserve(row.size());
    for (const auto& [feature, n_wf] : row) {
      double weight = lmi(n_wf, n_w, counts.feature_totals.at(feature), counts.total);
      if (weight > 0.0) entries.emplace_back(feature, weight);
    }
    vectors[i] = FeatureVector(std::move(entries));
  });

  WordVectors out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!vectors[i].empty()) out.emplace(*words[i], std::move(vectors[i]));
  }
  return out;
}

WordVectors prune_features(const WordVectors& vectors, std::size_t p) {
  if (p == 0) throw Error("feature cap p must be >= 1");
  WordVectors out;
  for (const auto& [word, vec] : vectors) out.emplace(word, vec.top(p));
  return out;
}

Thesaurus::Thesaurus(Lists lists) : lists_(std::move(lists)) {
  for (const auto& [word, list] : lists_) {
    auto& row = lookup_[word];
    for (const auto& n : list) row.emplace(n.word, n.similarity);
  }
}

const std::vector<Neighbor>& Thesaurus::neighbors(const std::string& word) const {
  auto it = lists_.find(word);
  if (it == lists_.end()) throw UnknownWordError(word);
  return it->second;
}

double Thesaurus::similarity(const std::string& word, const std::string& neighbor) const {
  auto row = lookup_.find(word);
  if (row == lookup_.end()) return 0.0;
  auto it = row->second.find(neighbor);
  return it == row->second.end() ? 0.0 : it->second;
}

std::size_t Thesaurus::row_count() const {
  std::size_t n = 0;
  for (const auto& [_, list] : lists_) n += list.size();
  return n;
}

Thesaurus build_thesaurus(const WordVectors& pruned, std::size_t n_max, std::size_t jobs) {
  std::vector<const std::string*> words;
  words.reserve(pruned.size());
  for (const auto& [word, _] : pruned) words.push_back(&word);

  // Inverted index: feature -> ids of words carrying it.
  std::unordered_map<std::string, std::vector<std::uint32_t>> postings;
  for (std::uint32_t id = 0; id < words.size(); ++id) {
    for (const auto& [feature, _] : pruned.at(*words[id]).entries()) postings[feature].push_back(id);
  }

  std::vector<std::vector<Neighbor>> lists(words.size());
  parallel_for(words.size(), jobs, [&](std::size_t u) {
    std::vector<std::uint32_t> overlap(words.size(), 0);
    std::vector<std::uint32_t> touched;
    for (const auto& [feature, _] : pruned.at(*words[u]).entries()) {
      for (std::uint32_t v : postings.at(feature)) {
        if (v == u) continue;
        if (overlap[v]++ == 0) touched.push_back(v);
      }
    }
    // Ids follow lexicographic word order, so id order breaks ties.
    std::sort(touched.begin(), touched.end(), [&](std::uint32_t a, std::uint32_t b) {
      return overlap[a] != overlap[b] ? overlap[a] > overlap[b] : a < b;
    });
    if (touched.size() > n_max) touched.resize(n_max);
    auto& list = lists[u];
    list.reserve(touched.size());
    for (std::uint32_t v : touched) list.push_back({*words[v], static_cast<double>(overlap[v])});
  });

  Thesaurus::Lists out;
  for (std::size_t u = 0; u < words.size(); ++u) {
    if (!lists[u].empty()) out.emplace(*words[u], std::move(lists[u]));
  }
  return Thesaurus(std::move(out));
}

}  // namespace egowsd::dt
