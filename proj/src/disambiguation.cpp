#include "egowsd/disambiguation.hpp"

#include <algorithm>
#include <charconv>
#include <random>
#include <unordered_map>

#include "egowsd/errors.hpp"
#include "egowsd/parallel.hpp"
#include "egowsd/random.hpp"

namespace egowsd::wsd {

std::string to_string(InventoryKind kind) { return kind == InventoryKind::words ? "words" : "super"; }

std::string to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::cluster: return "cluster";
    case FeatureKind::context: return "context";
    case FeatureKind::mfs: return "mfs";
    case FeatureKind::random: return "random";
  }
  return "context";
}

std::string ModelId::str() const { return to_string(inventory) + "-" + to_string(features); }

ModelId ModelId::make(std::string_view inventory, std::string_view features) {
  ModelId id;
  if (inventory == "words") id.inventory = InventoryKind::words;
  else if (inventory == "super") id.inventory = InventoryKind::super;
  else throw Error("unknown inventory '" + std::string(inventory) + "' (expected words or super)");
  if (features == "cluster") id.features = FeatureKind::cluster;
  else if (features == "context") id.features = FeatureKind::context;
  else if (features == "mfs") id.features = FeatureKind::mfs;
  else if (features == "random") id.features = FeatureKind::random;
  else throw Error("unknown features '" + std::string(features) + "' (expected cluster, context, mfs or random)");
  return id;
}

ModelId ModelId::parse(std::string_view text) {
  auto dash = text.find('-');
  if (dash == std::string_view::npos) throw Error("malformed model id '" + std::string(text) + "'");
  return make(text.substr(0, dash), text.substr(dash + 1));
}

std::string Candidate::str() const {
  return (kind == InventoryKind::words ? word : std::string("class")) + "#" + std::to_string(id);
}

Candidate Candidate::parse(std::string_view text) {
  auto ref = senses::SenseRef::parse(text);
  if (ref.word == "class") return {InventoryKind::super, "", ref.sense_id};
  return {InventoryKind::words, ref.word, ref.sense_id};
}

FeatureVector featurize_context(const corpus::Sentence& sentence, std::optional<std::size_t> target_index) {
  if (target_index && *target_index >= sentence.tokens.size()) {
    throw Error("target index " + std::to_string(*target_index) + " out of range");
  }
  std::vector<FeatureVector::Entry> bag;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    if (target_index && i == *target_index) continue;
    const auto& token = sentence.tokens[i];
    if (corpus::is_content(token)) bag.emplace_back(token.norm, 1.0);
  }
  return FeatureVector(std::move(bag)).normalized();
}

double score(const FeatureVector& context, const FeatureVector& sense_vec) { return cosine(context, sense_vec); }

std::optional<std::size_t> find_target(const corpus::Sentence& sentence, const std::string& word) {
  const std::string folded = corpus::fold_case(word);
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    if (sentence.tokens[i].norm == folded) return i;
  }
  return std::nullopt;
}

corpus::Sentence make_sentence(std::string_view text, const corpus::StopwordList& stopwords) {
  corpus::Sentence s;
  s.raw = std::string(text);
  s.tokens = corpus::tokenize(s.raw, stopwords);
  return s;
}

namespace {

void require_loaded(const Model& model) {
  if (!model.loaded() || (model.data().inventory.empty() && model.data().classes.empty())) {
    throw ModelNotLoadedError();
  }
}

std::vector<Candidate> candidates_for(const std::string& word, InventoryKind inventory, const Model& model) {
  require_loaded(model);
  std::vector<Candidate> out;
  if (inventory == InventoryKind::words) {
    const auto* entries = model.find_senses(word);
    if (entries == nullptr || entries->empty()) throw UnknownWordError(word);
    for (const auto& e : *entries) out.push_back({InventoryKind::words, word, e.sense_id});
  } else {
    if (model.data().classes.empty()) throw ModelNotLoadedError();
    for (const auto& c : model.data().classes) out.push_back({InventoryKind::super, "", c.class_id});
  }
  return out;
}

std::size_t candidate_size(const Model& model, const Candidate& c) {
  if (c.kind == InventoryKind::words) return model.sense({c.word, c.id}).members.size();
  return model.class_by_id(c.id).member_senses.size();
}

std::size_t mfs_index(const Model& model, const std::vector<Candidate>& candidates) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (candidate_size(model, candidates[i]) > candidate_size(model, candidates[best])) best = i;
  }
  return best;
}

Prediction baseline(const std::string& word, InventoryKind inventory, FeatureKind kind,
                    const std::vector<Candidate>& candidates, std::size_t chosen) {
  Prediction p;
  p.word = word;
  p.model_id = {inventory, kind};
  p.ranked.push_back({candidates[chosen], 0.0, {}});
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (i != chosen) p.ranked.push_back({candidates[i], 0.0, {}});
  }
  return p;
}

std::vector<CommonFeature> common_features(const FeatureVector& context, const FeatureVector& sense_vec) {
  std::vector<CommonFeature> out;
  for (auto& f : shared_features(context, sense_vec)) out.push_back({std::move(f.feature), f.left, f.right});
  std::stable_sort(out.begin(), out.end(), [](const CommonFeature& a, const CommonFeature& b) {
    return a.context_weight * a.sense_weight > b.context_weight * b.sense_weight;
  });
  return out;
}

}  // namespace

const FeatureVector& candidate_vector(const Model& model, const Candidate& candidate, FeatureKind features) {
  if (candidate.kind == InventoryKind::words) {
    const auto& entry = model.sense({candidate.word, candidate.id});
    if (features == FeatureKind::context && !entry.context_vec.empty()) return entry.context_vec;
    return entry.cluster_vec;
  }
  const auto& c = model.class_by_id(candidate.id);
  if (features == FeatureKind::context && !c.context_vec.empty()) return c.context_vec;
  return c.cluster_vec;
}

const hypernymy::HypernymLabels& candidate_hypernyms(const Model& model, const Candidate& candidate) {
  if (candidate.kind == InventoryKind::words) return model.sense({candidate.word, candidate.id}).hypernyms;
  return model.class_by_id(candidate.id).hypernyms;
}

Prediction mfs_predict(const std::string& word, InventoryKind inventory, const Model& model) {
  if (auto folded = corpus::fold_case(word); folded != word) return mfs_predict(folded, inventory, model);
  auto candidates = candidates_for(word, inventory, model);
  return baseline(word, inventory, FeatureKind::mfs, candidates, mfs_index(model, candidates));
}

Prediction random_predict(const std::string& word, InventoryKind inventory, const Model& model, std::uint64_t seed) {
  if (auto folded = corpus::fold_case(word); folded != word) return random_predict(folded, inventory, model, seed);
  auto candidates = candidates_for(word, inventory, model);
  std::mt19937_64 rng(seed);
  auto chosen = static_cast<std::size_t>(uniform_index(rng, candidates.size()));
  return baseline(word, inventory, FeatureKind::random, candidates, chosen);
}

Prediction disambiguate(const std::string& word, const corpus::Sentence& sentence,
                        std::optional<std::size_t> target_index, const ModelId& model_id, const Model& model,
                        std::uint64_t seed) {
  if (auto folded = corpus::fold_case(word); folded != word) {
    return disambiguate(folded, sentence, target_index, model_id, model, seed);
  }
  if (model_id.features == FeatureKind::mfs) return mfs_predict(word, model_id.inventory, model);
  if (model_id.features == FeatureKind::random) return random_predict(word, model_id.inventory, model, seed);

  auto candidates = candidates_for(word, model_id.inventory, model);
  const FeatureVector context = featurize_context(sentence, target_index);

  Prediction p;
  p.word = word;
  p.model_id = model_id;
  p.ranked.reserve(candidates.size());
  for (const auto& c : candidates) {
    const auto& vec = candidate_vector(model, c, model_id.features);
    p.ranked.push_back({c, score(context, vec), common_features(context, vec)});
  }
  // Candidates arrive in id order, so a stable sort keeps ids ascending on ties.
  std::stable_sort(p.ranked.begin(), p.ranked.end(),
                   [](const RankedSense& a, const RankedSense& b) { return a.score > b.score; });

  if (p.ranked.front().score <= 0.0) {
    std::size_t mfs = mfs_index(model, candidates);
    auto it = std::find_if(p.ranked.begin(), p.ranked.end(),
                           [&](const RankedSense& r) { return r.sense == candidates[mfs]; });
    std::rotate(p.ranked.begin(), it, it + 1);
    p.fallback_used = true;
    p.confidence = 0.0;
    return p;
  }
  p.confidence = p.ranked.size() > 1 ? p.ranked[0].score - p.ranked[1].score : 0.0;
  return p;
}

Prediction disambiguate(const std::string& word, std::string_view context, const ModelId& model_id,
                        const Model& model, std::uint64_t seed) {
  auto sentence = make_sentence(context, model.stopwords());
  return disambiguate(word, sentence, find_target(sentence, word), model_id, model, seed);
}

std::vector<Annotation> disambiguate_all(std::string_view text, const ModelId& model_id, const Model& model) {
  std::vector<Annotation> out;
  std::size_t token_base = 0;
  for (const auto& span : corpus::split_sentences(text)) {
    auto sentence = make_sentence(text.substr(span.begin, span.end - span.begin), model.stopwords());
    for (std::size_t i : corpus::detect_targets(sentence, model.vocabulary())) {
      const auto& token = sentence.tokens[i];
      try {
        auto prediction = disambiguate(token.norm, sentence, i, model_id, model);
        out.push_back({token_base + i,
                       {span.begin + token.offset.begin, span.begin + token.offset.end},
                       token.norm,
                       std::move(prediction)});
      } catch (const UnknownWordError&) {
      }
    }
    token_base += sentence.tokens.size();
  }
  return out;
}

WeightedWords trace_feature(const Candidate& sense, const std::string& feature, const Model& model) {
  std::vector<std::string> members;
  if (sense.kind == InventoryKind::words) {
    for (const auto& m : model.sense({sense.word, sense.id}).members) members.push_back(m.word);
  } else {
    members = model.class_by_id(sense.id).member_words;
  }
  WeightedWords out;
  for (const auto& m : members) {
    const auto* vec = model.word_vector(m);
    if (vec == nullptr) continue;
    double w = vec->weight(feature);
    if (w > 0.0) out.push_back({m, w});
  }
  std::sort(out.begin(), out.end(), [](const WeightedWord& a, const WeightedWord& b) {
    return a.weight != b.weight ? a.weight > b.weight : a.word < b.word;
  });
  return out;
}

std::map<std::size_t, std::vector<senses::UsageExample>> extract_usage_examples(
    const std::string& word, std::span<const corpus::Sentence* const> sentences, const Model& model, std::size_t k) {
  const ModelId words_context{InventoryKind::words, FeatureKind::context};
  struct Scored {
    double confidence;
    std::size_t order;
    const corpus::Sentence* sentence;
  };
  std::map<std::size_t, std::vector<Scored>> per_sense;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const auto& s = *sentences[i];
    auto target = find_target(s, word);
    auto p = disambiguate(word, s, target, words_context, model);
    if (p.fallback_used) continue;
    per_sense[p.best().sense.id].push_back({p.confidence, i, &s});
  }
  std::map<std::size_t, std::vector<senses::UsageExample>> out;
  for (auto& [id, scored] : per_sense) {
    std::stable_sort(scored.begin(), scored.end(),
                     [](const Scored& a, const Scored& b) { return a.confidence > b.confidence; });
    if (scored.size() > k) scored.resize(k);
    auto& examples = out[id];
    for (const auto& s : scored) examples.push_back({s.sentence->raw, s.confidence});
  }
  return out;
}

void attach_usage_examples(ModelData& data, std::span<const corpus::Sentence> corpus, std::size_t k,
                           std::size_t jobs) {
  for (auto& [_, entries] : data.inventory) {
    for (auto& e : entries) e.examples.clear();
  }
  if (k == 0 || data.inventory.empty()) return;

  std::unordered_map<std::string, std::vector<const corpus::Sentence*>> mentions;
  for (const auto& s : corpus) {
    for (const auto& token : s.tokens) {
      if (!data.inventory.count(token.norm)) continue;
      auto& list = mentions[token.norm];
      if (list.empty() || list.back() != &s) list.push_back(&s);
    }
  }

  const Model model(data);
  std::vector<std::string> words;
  for (const auto& [word, _] : data.inventory) words.push_back(word);
  std::vector<std::map<std::size_t, std::vector<senses::UsageExample>>> results(words.size());
  parallel_for(words.size(), jobs, [&](std::size_t i) {
    auto it = mentions.find(words[i]);
    if (it == mentions.end()) return;
    results[i] = extract_usage_examples(words[i], it->second, model, k);
  });
  for (std::size_t i = 0; i < words.size(); ++i) {
    auto& entries = data.inventory.at(words[i]);
    for (auto& [id, examples] : results[i]) entries.at(id).examples = std::move(examples);
  }
}

}  // namespace egowsd::wsd
