#include "hearst_eval.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "egowsd/corpus.hpp"
#include "egowsd/hypernymy.hpp"

namespace egowsd::testing {

double HearstScore::precision() const {
  std::size_t predicted = true_positives + false_positives;
  return predicted == 0 ? 1.0 : static_cast<double>(true_positives) / static_cast<double>(predicted);
}

double HearstScore::recall() const {
  std::size_t gold = true_positives + false_negatives;
  return gold == 0 ? 1.0 : static_cast<double>(true_positives) / static_cast<double>(gold);
}

HearstScore score_hearst_fixture(const std::filesystem::path& stem) {
  using Key = std::tuple<std::size_t, std::string, std::string>;
  auto txt = stem;
  txt += ".txt";
  auto tsv = stem;
  tsv += ".tsv";

  std::ifstream text(txt);
  if (!text) throw std::runtime_error("cannot open " + txt.string());
  std::vector<corpus::Sentence> lines;
  std::unordered_set<std::string> vocabulary;
  std::string line;
  while (std::getline(text, line)) {
    corpus::Sentence s{"fixture", lines.size(), corpus::tokenize(corpus::normalize_nfc(line)), line};
    for (const auto& t : s.tokens) vocabulary.insert(t.norm);
    lines.push_back(std::move(s));
  }

  std::map<Key, int> predicted;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (const auto& m : hypernymy::match_patterns(lines[i])) {
      auto hypo = hypernymy::singularize(m.hyponym, vocabulary);
      auto hyper = hypernymy::singularize(m.hypernym, vocabulary);
      if (hypo != hyper) ++predicted[{i + 1, hypo, hyper}];
    }
  }

  std::ifstream gold_in(tsv);
  if (!gold_in) throw std::runtime_error("cannot open " + tsv.string());
  std::map<Key, int> gold;
  std::getline(gold_in, line);  // header
  while (std::getline(gold_in, line)) {
    std::istringstream fields(line);
    std::string n, hypo, hyper;
    std::getline(fields, n, '\t');
    std::getline(fields, hypo, '\t');
    std::getline(fields, hyper, '\t');
    ++gold[{std::stoul(n), hypo, hyper}];
  }

  HearstScore score;
  auto describe = [](char sign, const Key& k) {
    return sign + std::to_string(std::get<0>(k)) + " " + std::get<1>(k) + " " + std::get<2>(k);
  };
  for (const auto& [key, n] : predicted) {
    int g = gold.count(key) ? gold.at(key) : 0;
    score.true_positives += static_cast<std::size_t>(std::min(n, g));
    if (n > g) {
      score.false_positives += static_cast<std::size_t>(n - g);
      score.mistakes.push_back(describe('+', key));
    }
  }
  for (const auto& [key, g] : gold) {
    int n = predicted.count(key) ? predicted.at(key) : 0;
    if (g > n) {
      score.false_negatives += static_cast<std::size_t>(g - n);
      score.mistakes.push_back(describe('-', key));
    }
  }
  return score;
}

}  // namespace egowsd::testing
