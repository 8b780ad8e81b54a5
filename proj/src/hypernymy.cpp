#include "egowsd/hypernymy.hpp"

#include <algorithm>
#include <array>
#include <optional>

#include "egowsd/parallel.hpp"

namespace egowsd::hypernymy {

void HypernymCounts::add(const std::string& hyponym, const std::string& hypernym, std::uint64_t n) {
  if (n == 0 || hyponym == hypernym) return;
  rows_[hyponym][hypernym] += n;
}

void HypernymCounts::merge(const HypernymCounts& other) {
  for (const auto& [hypo, row] : other.rows_) {
    for (const auto& [hyper, n] : row) add(hypo, hyper, n);
  }
}

std::uint64_t HypernymCounts::frequency(const std::string& hyponym, const std::string& hypernym) const {
  auto row = rows_.find(hyponym);
  if (row == rows_.end()) return 0;
  auto it = row->second.find(hypernym);
  return it == row->second.end() ? 0 : it->second;
}

std::size_t HypernymCounts::size() const {
  std::size_t n = 0;
  for (const auto& [_, row] : rows_) n += row.size();
  return n;
}

namespace {

constexpr std::array<std::string_view, 24> kDeterminers = {
    "a",   "an",  "the",  "this", "that", "these", "those", "some",    "any",  "each", "every", "its",
    "their", "his", "her", "our", "my",   "your",  "many",  "several", "various", "all", "both", "no"};

constexpr std::array<std::string_view, 9> kCues = {"such", "as", "and", "or", "other", "including", "especially",
                                                   "is", ","};

// Longer runs of phrase tokens are split into consecutive phrases.
constexpr std::size_t kMaxPhrase = 3;

bool is_determiner(std::string_view w) {
  return std::find(kDeterminers.begin(), kDeterminers.end(), w) != kDeterminers.end();
}

bool is_cue(std::string_view w) { return std::find(kCues.begin(), kCues.end(), w) != kCues.end(); }

struct Item {
  bool noun_phrase = false;
  std::string text;        // head for noun phrases, norm otherwise
  std::string determiner;  // determiner skipped right before this item
};

std::vector<Item> chunk(const corpus::Sentence& sentence) {
  std::vector<Item> items;
  std::string pending_det;
  std::size_t run = 0;
  for (const auto& token : sentence.tokens) {
    const auto& w = token.norm;
    if (is_determiner(w)) {
      pending_det = w;
      run = 0;
      continue;
    }
    bool np_token = !token.is_stopword && !is_cue(w) && corpus::is_alphabetic(w);
    if (np_token) {
      if (run == kMaxPhrase) run = 0;
      if (run > 0) {
        // Extend the phrase; only the head (last token) is kept.
        items.back().text = w;
      } else {
        items.push_back({true, w, pending_det});
      }
      ++run;
      pending_det.clear();
      continue;
    }
    items.push_back({false, w, pending_det});
    pending_det.clear();
    run = 0;
  }
  return items;
}

class Matcher {
 public:
  explicit Matcher(const std::vector<Item>& items) : items_(items) {}

  std::vector<PatternMatch> run() {
    for (std::size_t i = 0; i < items_.size(); ++i) {
      such_as(i);
      such_h_as(i);
      keyword_list(i, "including");
      keyword_list(i, "especially");
      and_other(i);
      is_a(i);
    }
    return std::move(out_);
  }

 private:
  bool np(std::size_t i) const { return i < items_.size() && items_[i].noun_phrase; }
  bool lit(std::size_t i, std::string_view w) const {
    return i < items_.size() && !items_[i].noun_phrase && items_[i].text == w;
  }
  bool conj(std::size_t i) const { return lit(i, "and") || lit(i, "or"); }

  // X (, X)* ((,)? (and|or) X)? starting at `j`.
  std::vector<std::string> forward_list(std::size_t j) const {
    std::vector<std::string> heads;
    if (!np(j)) return heads;
    heads.push_back(items_[j].text);
    ++j;
    for (;;) {
      if (lit(j, ",") && np(j + 1)) {
        heads.push_back(items_[j + 1].text);
        j += 2;
      } else if (conj(j) && np(j + 1)) {
        heads.push_back(items_[j + 1].text);
        break;
      } else if (lit(j, ",") && conj(j + 1) && np(j + 2)) {
        heads.push_back(items_[j + 2].text);
        break;
      } else {
        break;
      }
    }
    return heads;
  }

  void emit(const std::vector<std::string>& hyponyms, const std::string& hypernym) {
    for (const auto& h : hyponyms) out_.push_back({h, hypernym});
  }

  // Optional comma between the hypernym and the cue.
  std::size_t after_optional_comma(std::size_t i) const { return lit(i, ",") ? i + 1 : i; }

  void such_as(std::size_t i) {
    if (!np(i)) return;
    std::size_t j = after_optional_comma(i + 1);
    if (lit(j, "such") && lit(j + 1, "as")) emit(forward_list(j + 2), items_[i].text);
  }

  void such_h_as(std::size_t i) {
    if (lit(i, "such") && np(i + 1) && lit(i + 2, "as")) emit(forward_list(i + 3), items_[i + 1].text);
  }

  void keyword_list(std::size_t i, std::string_view cue) {
    if (!np(i)) return;
    std::size_t j = after_optional_comma(i + 1);
    if (lit(j, cue)) emit(forward_list(j + 1), items_[i].text);
  }

  void and_other(std::size_t k) {
    if (!lit(k, "other") || !np(k + 1) || k < 2 || !conj(k - 1)) return;
    std::size_t j = k - 2;
    if (lit(j, ",")) {
      if (j == 0) return;
      --j;
    }
    if (!np(j)) return;
    std::vector<std::string> heads{items_[j].text};
    while (j >= 2 && lit(j - 1, ",") && np(j - 2)) {
      j -= 2;
      heads.push_back(items_[j].text);
    }
    std::reverse(heads.begin(), heads.end());
    emit(heads, items_[k + 1].text);
  }

  void is_a(std::size_t i) {
    if (np(i) && lit(i + 1, "is") && np(i + 2) &&
        (items_[i + 2].determiner == "a" || items_[i + 2].determiner == "an")) {
      out_.push_back({items_[i].text, items_[i + 2].text});
    }
  }

  const std::vector<Item>& items_;
  std::vector<PatternMatch> out_;
};

}  // namespace

std::vector<PatternMatch> match_patterns(const corpus::Sentence& sentence) {
  auto items = chunk(sentence);
  return Matcher(items).run();
}

std::string singularize(const std::string& word, const std::unordered_set<std::string>& vocabulary) {
  if (word.size() >= 3 && word.back() == 's') {
    std::string stem = word.substr(0, word.size() - 1);
    if (vocabulary.count(stem)) return stem;
  }
  return word;
}

void HearstExtractor::add(const corpus::Sentence& sentence) {
  for (const auto& token : sentence.tokens) vocabulary_.insert(token.norm);
  for (auto& m : match_patterns(sentence)) ++raw_[{m.hyponym, m.hypernym}];
}

void HearstExtractor::merge(const HearstExtractor& other) {
  for (const auto& [key, n] : other.raw_) raw_[key] += n;
  vocabulary_.insert(other.vocabulary_.begin(), other.vocabulary_.end());
}

HypernymCounts HearstExtractor::finish() const {
  HypernymCounts counts;
  for (const auto& [key, n] : raw_) {
    counts.add(singularize(key.first, vocabulary_), singularize(key.second, vocabulary_), n);
  }
  return counts;
}

HypernymCounts extract_hypernym_pairs(std::span<const corpus::Sentence> sentences, std::size_t jobs) {
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, sentences.size() / 256));
  std::vector<HearstExtractor> shards(jobs);
  std::size_t chunk_size = (sentences.size() + jobs - 1) / jobs;
  parallel_for(jobs, jobs, [&](std::size_t s) {
    std::size_t begin = s * chunk_size;
    std::size_t end = std::min(sentences.size(), begin + chunk_size);
    for (std::size_t i = begin; i < end; ++i) shards[s].add(sentences[i]);
  });
  for (std::size_t s = 1; s < shards.size(); ++s) shards[0].merge(shards[s]);
  return shards[0].finish();
}

namespace {

HypernymLabels rank_labels(const std::map<std::string, double>& scores, std::size_t k_hyper) {
  HypernymLabels labels;
  for (const auto& [h, s] : scores) {
    if (s > 0.0) labels.push_back({h, s});
  }
  std::stable_sort(labels.begin(), labels.end(),
                   [](const WeightedWord& a, const WeightedWord& b) { return a.weight > b.weight; });
  if (labels.size() > k_hyper) labels.resize(k_hyper);
  return labels;
}

}  // namespace

HypernymLabels label_sense(const cluster::SenseCluster& sense, const HypernymCounts& counts, std::size_t k_hyper) {
  std::map<std::string, double> scores;
  for (const auto& member : sense.members) {
    auto row = counts.by_hyponym().find(member.word);
    if (row == counts.by_hyponym().end()) continue;
    for (const auto& [h, n] : row->second) scores[h] += member.weight * static_cast<double>(n);
  }
  return rank_labels(scores, k_hyper);
}

HypernymLabels label_class(const std::vector<std::string>& members, const HypernymCounts& counts,
                           std::size_t k_hyper) {
  std::map<std::string, double> scores;
  for (const auto& member : members) {
    auto row = counts.by_hyponym().find(member);
    if (row == counts.by_hyponym().end()) continue;
    for (const auto& [h, n] : row->second) scores[h] += static_cast<double>(n);
  }
  return rank_labels(scores, k_hyper);
}

}  // namespace egowsd::hypernymy
