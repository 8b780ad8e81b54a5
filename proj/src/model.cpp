#include "egowsd/model.hpp"

#include <charconv>
#include <fstream>

#include "egowsd/errors.hpp"

namespace egowsd {

namespace {

std::uint64_t parse_unsigned(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error("config: " + key + " expects a non-negative integer, got '" + value + "'");
  }
  return out;
}

}  // namespace

void PipelineConfig::validate() const {
  auto at_least_one = [](const char* key, std::uint64_t v) {
    if (v < 1) throw Error(std::string("config: ") + key + " must be >= 1");
  };
  at_least_one("window", window);
  at_least_one("p", p);
  at_least_one("n_max", n_max);
  at_least_one("n_ego", n_ego);
  at_least_one("n_inner", n_inner);
  at_least_one("max_iter", max_iter);
  at_least_one("min_cluster_size", min_cluster_size);
  at_least_one("min_class_size", min_class_size);
  at_least_one("k_hyper", k_hyper);
  at_least_one("vec_cap", vec_cap);
}

std::vector<std::pair<std::string, std::string>> PipelineConfig::to_pairs() const {
  return {
      {"window", std::to_string(window)},
      {"min_word_freq", std::to_string(min_word_freq)},
      {"p", std::to_string(p)},
      {"n_max", std::to_string(n_max)},
      {"n_ego", std::to_string(n_ego)},
      {"n_inner", std::to_string(n_inner)},
      {"max_iter", std::to_string(max_iter)},
      {"min_cluster_size", std::to_string(min_cluster_size)},
      {"min_class_size", std::to_string(min_class_size)},
      {"k_hyper", std::to_string(k_hyper)},
      {"vec_cap", std::to_string(vec_cap)},
      {"k_examples", std::to_string(k_examples)},
      {"seed", std::to_string(seed)},
      {"doc_mode", doc_mode == corpus::DocumentMode::file ? "file" : "line"},
  };
}

PipelineConfig PipelineConfig::from_pairs(const std::vector<std::pair<std::string, std::string>>& pairs) {
  PipelineConfig c;
  for (const auto& [key, value] : pairs) {
    if (key == "window") c.window = parse_unsigned(key, value);
    else if (key == "min_word_freq") c.min_word_freq = parse_unsigned(key, value);
    else if (key == "p") c.p = parse_unsigned(key, value);
    else if (key == "n_max") c.n_max = parse_unsigned(key, value);
    else if (key == "n_ego") c.n_ego = parse_unsigned(key, value);
    else if (key == "n_inner") c.n_inner = parse_unsigned(key, value);
    else if (key == "max_iter") c.max_iter = parse_unsigned(key, value);
    else if (key == "min_cluster_size") c.min_cluster_size = parse_unsigned(key, value);
    else if (key == "min_class_size") c.min_class_size = parse_unsigned(key, value);
    else if (key == "k_hyper") c.k_hyper = parse_unsigned(key, value);
    else if (key == "vec_cap") c.vec_cap = parse_unsigned(key, value);
    else if (key == "k_examples") c.k_examples = parse_unsigned(key, value);
    else if (key == "seed") c.seed = parse_unsigned(key, value);
    else if (key == "doc_mode") {
      if (value == "file") c.doc_mode = corpus::DocumentMode::file;
      else if (value == "line") c.doc_mode = corpus::DocumentMode::line;
      else throw Error("config: doc_mode must be 'file' or 'line', got '" + value + "'");
    } else {
      throw Error("config: unknown key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto sep = t.find('\t');
    if (sep == std::string::npos) sep = t.find('=');
    if (sep == std::string::npos) throw ParseError(path, line_no, "expected key<TAB>value or key=value");
    pairs.emplace_back(trim(t.substr(0, sep)), trim(t.substr(sep + 1)));
  }
  return from_pairs(pairs);
}

std::size_t ModelData::sense_count() const {
  std::size_t n = 0;
  for (const auto& [_, entries] : inventory) n += entries.size();
  return n;
}

Model::Model(ModelData data) : data_(std::make_shared<const ModelData>(std::move(data))) {
  for (const auto& [word, entries] : data_->inventory) {
    senses_.emplace(word, &entries);
    if (!entries.empty()) vocabulary_.insert(word);
  }
  for (const auto& [word, vec] : data_->word_vectors) vectors_.emplace(word, &vec);
  for (const auto& c : data_->classes) {
    for (const auto& w : c.member_words) classes_of_[w].push_back(c.class_id);
  }
}

const std::vector<senses::SenseEntry>* Model::find_senses(const std::string& word) const {
  auto it = senses_.find(word);
  return it == senses_.end() ? nullptr : it->second;
}

const std::vector<senses::SenseEntry>& Model::senses_of(const std::string& word) const {
  if (const auto* found = find_senses(word)) return *found;
  throw NotFoundError("not found: " + word);
}

const senses::SenseEntry& Model::sense(const senses::SenseRef& ref) const {
  const auto& entries = senses_of(ref.word);
  if (ref.sense_id >= entries.size()) throw NotFoundError("not found: " + ref.str());
  return entries[ref.sense_id];
}

const senses::SemanticClass& Model::class_by_id(std::size_t class_id) const {
  if (!data_ || class_id >= data_->classes.size()) throw NotFoundError("not found: class " + std::to_string(class_id));
  return data_->classes[class_id];
}

const std::vector<std::size_t>& Model::classes_of(const std::string& word) const {
  static const std::vector<std::size_t> none;
  auto it = classes_of_.find(word);
  return it == classes_of_.end() ? none : it->second;
}

const FeatureVector* Model::word_vector(const std::string& word) const {
  auto it = vectors_.find(word);
  return it == vectors_.end() ? nullptr : it->second;
}

}  // namespace egowsd
