#include <doctest.h>

#include <cmath>
#include <random>

#include "egowsd/disambiguation.hpp"
#include "egowsd/errors.hpp"
#include "fixture_model.hpp"

using namespace egowsd;
using namespace egowsd::wsd;

namespace {

const Model& fixture() {
  static const Model model(testing::make_fixture_model());
  return model;
}

const ModelId kWordsContext{InventoryKind::words, FeatureKind::context};

senses::SenseEntry entry(const std::string& word, std::size_t id, WeightedWords members, FeatureVector context) {
  senses::SenseEntry e;
  e.word = word;
  e.sense_id = id;
  e.members = std::move(members);
  e.cluster_vec = senses::cluster_vector(e.members);
  e.context_vec = context.normalized();
  return e;
}

}  // namespace

TEST_SUITE("wsd") {
  TEST_CASE("model ids and candidates") {
    CHECK(ModelId::parse("super-mfs") == ModelId{InventoryKind::super, FeatureKind::mfs});
    CHECK(ModelId::make("words", "cluster").str() == "words-cluster");
    CHECK_THROWS_AS(ModelId::parse("words"), Error);
    CHECK_THROWS_AS(ModelId::parse("words-bogus"), Error);
    CHECK(Candidate::parse("class#4") == Candidate{InventoryKind::super, "", 4});
    CHECK(Candidate::parse("jaguar#1").str() == "jaguar#1");
  }

  TEST_CASE("featurize_context: documented examples") {
    auto s = make_sentence("jaguar is a large spotted predator", *corpus::StopwordList::builtin());
    auto v = featurize_context(s, 0);
    REQUIRE(v.size() == 3);
    for (const char* f : {"large", "spotted", "predator"}) CHECK(v.weight(f) == doctest::Approx(1 / std::sqrt(3.0)));

    auto z = make_sentence("the a of", *corpus::StopwordList::builtin());
    CHECK(featurize_context(z, 1).empty());

    auto r = make_sentence("big cat big", *corpus::StopwordList::builtin());
    auto rv = featurize_context(r, 1);
    CHECK(rv.weight("big") == doctest::Approx(2 / std::sqrt(4.0)));
    CHECK_THROWS_AS(featurize_context(r, 9), Error);
  }

  TEST_CASE("score: documented examples") {
    FeatureVector a({{"x", 1}, {"y", 1}});
    CHECK(std::abs(score(a, a) - 1.0) <= 1e-9);
    CHECK(score(a, FeatureVector({{"q", 1}})) == 0.0);
  }

  TEST_CASE("disambiguate: fixture jaguar/predator picks the animal sense") {
    auto p = disambiguate("Jaguar", "Jaguar is a large spotted predator of tropical America", kWordsContext, fixture());
    REQUIRE(p.ranked.size() == 2);
    CHECK(p.best().sense == Candidate{InventoryKind::words, "jaguar", 0});
    CHECK(candidate_hypernyms(fixture(), p.best().sense).front().word == "animal");
    CHECK_FALSE(p.fallback_used);
    CHECK(p.confidence == doctest::Approx(p.ranked[0].score - p.ranked[1].score));
    bool has_predator = false;
    for (const auto& f : p.best().common_features) has_predator = has_predator || f.feature == "predator";
    CHECK(has_predator);
  }

  TEST_CASE("disambiguate: zero overlap falls back to MFS") {
    auto p = disambiguate("jaguar", "nothing relevant here", kWordsContext, fixture());
    CHECK(p.fallback_used);
    CHECK(p.confidence == 0.0);
    CHECK(p.best().sense.id == 0);  // four members beat three
  }

  TEST_CASE("disambiguate: unknown word and empty model") {
    CHECK_THROWS_AS(disambiguate("zebra", "a zebra", kWordsContext, fixture()), UnknownWordError);
    CHECK_THROWS_AS(disambiguate("x", "x", kWordsContext, Model()), ModelNotLoadedError);
  }

  TEST_CASE("disambiguate: super inventory ranks every class") {
    auto p = disambiguate("jaguar", "engine luxury drive", {InventoryKind::super, FeatureKind::cluster}, fixture());
    CHECK(p.ranked.size() == 2);
    auto q = disambiguate("jaguar", "the jaguar engine smells of juice",
                          {InventoryKind::super, FeatureKind::context}, fixture());
    CHECK(q.best().sense == Candidate{InventoryKind::super, "", 1});
  }

  TEST_CASE("disambiguate: single candidate falls back iff score is zero") {
    ModelData data;
    data.inventory["w"] = {entry("w", 0, {{"a", 1}}, FeatureVector({{"x", 1}}))};
    Model m(data);
    auto hit = disambiguate("w", "w x", kWordsContext, m);
    CHECK_FALSE(hit.fallback_used);
    CHECK(hit.best().score > 0);
    auto miss = disambiguate("w", "w y", kWordsContext, m);
    CHECK(miss.fallback_used);
    CHECK(miss.ranked.size() == 1);
  }

  TEST_CASE("baselines: documented examples") {
    ModelData data;
    data.inventory["w"] = {entry("w", 0, {{"a", 1}, {"b", 1}, {"c", 1}}, FeatureVector()),
                           entry("w", 1, {{"d", 1}, {"e", 1}, {"f", 1}, {"g", 1}, {"h", 1}}, FeatureVector())};
    data.inventory["solo"] = {entry("solo", 0, {{"a", 1}}, FeatureVector())};
    Model m(data);
    CHECK(mfs_predict("w", InventoryKind::words, m).best().sense.id == 1);
    CHECK(mfs_predict("solo", InventoryKind::words, m).best().sense.id == 0);
    CHECK(random_predict("solo", InventoryKind::words, m, 123).best().sense.id == 0);
    CHECK(random_predict("w", InventoryKind::words, m, 5) == random_predict("w", InventoryKind::words, m, 5));
  }

  TEST_CASE("property: MFS always returns the largest candidate") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 200; ++trial) {
      ModelData data;
      std::size_t largest = 0, best = 0;
      for (std::size_t id = 0, n = 1 + rng() % 6; id < n; ++id) {
        WeightedWords members;
        for (std::size_t k = 0, size = 1 + rng() % 10; k < size; ++k) members.push_back({"m" + std::to_string(k), 1.0});
        if (members.size() > largest) {
          largest = members.size();
          best = id;
        }
        data.inventory["w"].push_back(entry("w", id, members, FeatureVector()));
      }
      CHECK(mfs_predict("w", InventoryKind::words, Model(data)).best().sense.id == best);
    }
  }

  TEST_CASE("property: ranking order, common features, determinism, scale invariance") {
    std::mt19937_64 rng(62);
    const std::vector<std::string> vocab = {"predator", "engine", "jungle", "code", "venom", "juice", "software",
                                            "luxury", "drive", "spotted", "tree", "stock", "prey", "bite"};
    for (int trial = 0; trial < 300; ++trial) {
      std::string context = "jaguar python apple";
      for (int k = 0; k < 4; ++k) context += " " + vocab[rng() % vocab.size()];
      for (const char* word : {"jaguar", "python", "apple"}) {
        for (auto features : {FeatureKind::cluster, FeatureKind::context}) {
          ModelId id{InventoryKind::words, features};
          auto p = disambiguate(word, context, id, fixture());
          CHECK(p == disambiguate(word, context, id, fixture()));
          for (std::size_t i = 1; i < p.ranked.size() && !p.fallback_used; ++i) {
            const auto& a = p.ranked[i - 1];
            const auto& b = p.ranked[i];
            CHECK((a.score > b.score || (a.score == b.score && a.sense.id < b.sense.id)));
          }
          for (const auto& r : p.ranked) {
            for (const auto& f : r.common_features) {
              CHECK(f.context_weight > 0);
              CHECK(f.sense_weight > 0);
              CHECK(candidate_vector(fixture(), r.sense, features).contains(f.feature));
            }
          }
        }
      }
      // Rescaling every sense vector by the same constant keeps the ranking.
      auto scaled = testing::make_fixture_model();
      for (auto& [_, entries] : scaled.inventory) {
        for (auto& e : entries) e.context_vec = e.context_vec.scaled(7.25);
      }
      Model sm(scaled);
      auto a = disambiguate("jaguar", context, kWordsContext, fixture());
      auto b = disambiguate("jaguar", context, kWordsContext, sm);
      REQUIRE(a.ranked.size() == b.ranked.size());
      for (std::size_t i = 0; i < a.ranked.size(); ++i) CHECK(a.ranked[i].sense == b.ranked[i].sense);
    }
  }

  TEST_CASE("disambiguate_all: documented examples") {
    std::string text = "The jaguar hunts its prey. Python code is fun.";
    auto all = disambiguate_all(text, kWordsContext, fixture());
    REQUIRE(all.size() == 2);
    CHECK(all[0].word == "jaguar");
    CHECK(text.substr(all[0].span.begin, all[0].span.end - all[0].span.begin) == "jaguar");
    CHECK(all[1].word == "python");
    CHECK(text.substr(all[1].span.begin, all[1].span.end - all[1].span.begin) == "Python");
    CHECK(all[1].token_index == 6);
    CHECK(disambiguate_all("nothing to see", kWordsContext, fixture()).empty());
    CHECK(disambiguate_all("", kWordsContext, fixture()).empty());
  }

  TEST_CASE("disambiguate_all matches single-word calls token by token") {
    std::string text = "A jaguar with a new engine. The python bite carries venom! Apple juice, apple stock.";
    auto all = disambiguate_all(text, kWordsContext, fixture());
    REQUIRE(all.size() == 4);
    std::size_t prev_end = 0;
    for (const auto& a : all) {
      CHECK(a.span.begin >= prev_end);
      prev_end = a.span.end;
      auto spans = corpus::split_sentences(text);
      for (const auto& s : spans) {
        if (a.span.begin < s.begin || a.span.end > s.end) continue;
        auto sentence = make_sentence(text.substr(s.begin, s.end - s.begin), fixture().stopwords());
        std::optional<std::size_t> index;
        for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
          if (s.begin + sentence.tokens[i].offset.begin == a.span.begin) index = i;
        }
        REQUIRE(index);
        CHECK(a.prediction == disambiguate(a.word, sentence, index, kWordsContext, fixture()));
      }
    }
  }

  TEST_CASE("trace_feature: documented examples") {
    ModelData data;
    data.word_vectors = {{"a", FeatureVector({{"x", 2}})}, {"b", FeatureVector({{"y", 1}})}};
    data.inventory["w"] = {entry("w", 0, {{"a", 1}, {"b", 1}}, FeatureVector({{"x", 1}}))};
    Model m(data);
    Candidate c{InventoryKind::words, "w", 0};
    CHECK(trace_feature(c, "x", m) == WeightedWords{{"a", 2}});
    CHECK(trace_feature(c, "nope", m).empty());
    auto predator = trace_feature({InventoryKind::words, "jaguar", 0}, "predator", fixture());
    CHECK(predator == WeightedWords{{"lion", 3}, {"leopard", 2}, {"cougar", 1}});
  }

  TEST_CASE("usage examples: documented examples") {
    auto data = testing::make_fixture_model();
    Model m(data);
    auto stop = *corpus::StopwordList::builtin();
    std::vector<corpus::Sentence> sentences = {make_sentence("The jaguar eats its prey", stop),
                                               make_sentence("The jaguar engine roars", stop)};
    std::vector<const corpus::Sentence*> ptrs = {&sentences[0], &sentences[1]};
    auto examples = extract_usage_examples("jaguar", ptrs, m, 5);
    REQUIRE(examples.size() == 2);
    CHECK(examples.at(0).front().sentence == "The jaguar eats its prey");
    CHECK(examples.at(1).front().sentence == "The jaguar engine roars");

    std::vector<corpus::Sentence> none = {make_sentence("jaguar jaguar", stop), make_sentence("a jaguar", stop)};
    std::vector<const corpus::Sentence*> none_ptrs = {&none[0], &none[1]};
    CHECK(extract_usage_examples("jaguar", none_ptrs, m, 5).empty());

    attach_usage_examples(data, none, 5);
    for (const auto& e : data.inventory.at("jaguar")) CHECK(e.examples.empty());
    attach_usage_examples(data, sentences, 1);
    CHECK(data.inventory.at("jaguar")[0].examples.size() == 1);
  }
}
