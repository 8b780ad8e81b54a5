#include "synthetic.hpp"

#include <random>
#include <set>
#include <stdexcept>

#include "egowsd/random.hpp"

namespace egowsd::testing {

namespace {

const char* const kFillers[] = {"the", "a", "of", "and", "with", "in", "on", "was", "for", "to", "by", "from"};

std::string pseudoword(std::mt19937_64& rng) {
  static const char* const onsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "t", "v", "z", "br", "kr", "tr"};
  static const char* const vowels[] = {"a", "e", "i", "o", "u"};
  std::string w;
  std::size_t syllables = 2 + uniform_index(rng, 2);
  for (std::size_t i = 0; i < syllables; ++i) {
    w += onsets[uniform_index(rng, std::size(onsets))];
    w += vowels[uniform_index(rng, std::size(vowels))];
  }
  w += "n";
  return w;
}

std::string sentence_from(std::vector<std::string> words, std::mt19937_64& rng) {
  shuffle(words, rng);
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    if (uniform_index(rng, 2) == 0) {
      out += kFillers[uniform_index(rng, std::size(kFillers))];
      out += ' ';
    }
    out += words[i];
  }
  out += " .";
  return out;
}

std::vector<std::string> pick(const std::vector<std::string>& pool, std::size_t k, std::mt19937_64& rng) {
  std::vector<std::string> copy = pool;
  shuffle(copy, rng);
  copy.resize(std::min(k, copy.size()));
  return copy;
}

}  // namespace

const std::vector<std::string>& topic_labels() {
  static const std::vector<std::string> labels = {
      "animal", "vehicle", "fruit",  "instrument", "weapon", "disease", "mineral", "garment", "beverage", "tool",
      "bird",   "fish",    "plant",  "vessel",     "fabric", "spice",   "dance",   "game",    "tree",     "metal"};
  return labels;
}

SyntheticCorpus make_synthetic(const SyntheticSpec& spec) {
  if (spec.topics > topic_labels().size() || spec.ambiguous * 2 > spec.topics) {
    throw std::invalid_argument("synthetic: too many topics or ambiguous words");
  }
  SyntheticCorpus c;
  c.spec = spec;
  std::mt19937_64 rng(spec.seed);
  std::set<std::string> used(std::begin(kFillers), std::end(kFillers));
  for (const auto& l : topic_labels()) used.insert(l);
  auto fresh = [&] {
    for (;;) {
      auto w = pseudoword(rng);
      if (used.insert(w).second) return w;
    }
  };

  for (std::size_t t = 0; t < spec.topics; ++t) {
    c.labels.push_back(topic_labels()[t]);
    c.topic_words.emplace_back();
    for (std::size_t i = 0; i < spec.words_per_topic; ++i) {
      c.topic_words[t].push_back(fresh());
      c.topic_of[c.topic_words[t].back()] = t;
    }
  }
  for (std::size_t i = 0; i < spec.ambiguous; ++i) c.ambiguous_words.push_back(fresh());

  for (std::size_t n = 0; n < spec.sentences; ++n) {
    std::size_t t = n % spec.topics;
    auto words = pick(c.topic_words[t], spec.words_per_sentence, rng);
    if (t / 2 < spec.ambiguous && uniform_real(rng) < spec.ambiguous_rate) words.push_back(c.ambiguous_words[t / 2]);
    c.sentences.push_back(sentence_from(std::move(words), rng));
  }
  for (std::size_t t = 0; t < spec.topics; ++t) {
    for (std::size_t r = 0; r < spec.isa_per_word; ++r) {
      for (const auto& w : c.topic_words[t]) {
        c.sentences.push_back("The " + w + " is a " + c.labels[t] + " .");
      }
    }
    auto three = pick(c.topic_words[t], 3, rng);
    c.sentences.push_back(c.labels[t] + "s such as " + three[0] + ", " + three[1] + " and " + three[2] + " .");
  }
  shuffle(c.sentences, rng);
  return c;
}

std::string SyntheticCorpus::text() const {
  std::string out;
  for (const auto& s : sentences) {
    out += s;
    out += '\n';
  }
  return out;
}

std::vector<HeldOut> SyntheticCorpus::held_out(std::size_t per_word, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::vector<HeldOut> out;
  for (std::size_t i = 0; i < ambiguous_words.size(); ++i) {
    for (std::size_t k = 0; k < per_word; ++k) {
      std::size_t topic = 2 * i + (k % 2);
      auto words = pick(topic_words[topic], spec.words_per_sentence, rng);
      words.push_back(ambiguous_words[i]);
      out.push_back({ambiguous_words[i], sentence_from(std::move(words), rng), topic});
    }
  }
  return out;
}

int SyntheticCorpus::majority_topic(const std::vector<std::string>& members) const {
  std::map<std::size_t, std::size_t> votes;
  for (const auto& m : members) {
    if (auto it = topic_of.find(m); it != topic_of.end()) ++votes[it->second];
  }
  int best = -1;
  std::size_t best_n = 0;
  for (const auto& [t, n] : votes) {
    if (n > best_n) {
      best = static_cast<int>(t);
      best_n = n;
    }
  }
  return 2 * best_n > members.size() ? best : -1;
}

}  // namespace egowsd::testing
