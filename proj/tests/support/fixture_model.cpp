#include "fixture_model.hpp"

#include <algorithm>

#include "egowsd/senses.hpp"

namespace egowsd::testing {

namespace {

FeatureVector vec(std::initializer_list<std::pair<const char*, double>> entries) {
  std::vector<FeatureVector::Entry> out;
  for (const auto& [f, w] : entries) out.emplace_back(f, w);
  return FeatureVector(std::move(out));
}

}  // namespace

ModelData make_fixture_model() {
  ModelData data;
  data.config.k_hyper = 3;
  data.stats = {3, 40, 400};

  data.word_vectors = {
      {"leopard", vec({{"predator", 2}, {"spotted", 3}, {"jungle", 1}})},
      {"lion", vec({{"predator", 3}, {"prey", 2}, {"savanna", 2}})},
      {"tiger", vec({{"prey", 2}, {"jungle", 2}, {"stripes", 2}})},
      {"cougar", vec({{"prey", 1}, {"mountain", 2}, {"predator", 1}})},
      {"bmw", vec({{"engine", 3}, {"drive", 2}, {"dealer", 1}})},
      {"audi", vec({{"engine", 2}, {"luxury", 2}})},
      {"porsche", vec({{"drive", 2}, {"luxury", 3}, {"speed", 1}})},
      {"java", vec({{"code", 3}, {"program", 2}})},
      {"ruby", vec({{"code", 2}, {"gem", 2}})},
      {"perl", vec({{"program", 1}, {"script", 2}})},
      {"cobra", vec({{"venom", 3}, {"bite", 2}})},
      {"viper", vec({{"venom", 2}, {"bite", 1}, {"snake", 1}})},
      {"pear", vec({{"juice", 2}, {"tree", 2}})},
      {"banana", vec({{"juice", 1}, {"tree", 1}, {"bread", 2}})},
      {"mango", vec({{"juice", 2}, {"tropical", 1}})},
      {"microsoft", vec({{"software", 3}, {"stock", 2}})},
      {"google", vec({{"software", 2}, {"stock", 1}, {"search", 2}})},
      {"jaguar", vec({{"predator", 1}, {"engine", 1}, {"jungle", 1}})},
      {"python", vec({{"code", 1}, {"venom", 1}})},
      {"apple", vec({{"juice", 1}, {"software", 1}})},
  };

  auto& h = data.hearst;
  h.add("leopard", "animal", 2);
  h.add("leopard", "cat", 1);
  h.add("lion", "animal", 1);
  h.add("lion", "cat", 2);
  h.add("tiger", "cat", 1);
  h.add("cougar", "animal", 1);
  h.add("bmw", "car", 2);
  h.add("audi", "car", 1);
  h.add("audi", "vehicle", 1);
  h.add("porsche", "car", 1);
  h.add("java", "language", 2);
  h.add("ruby", "language", 1);
  h.add("perl", "language", 1);
  h.add("cobra", "snake", 2);
  h.add("viper", "snake", 1);
  h.add("viper", "reptile", 1);
  h.add("pear", "fruit", 1);
  h.add("banana", "fruit", 2);
  h.add("mango", "fruit", 1);
  h.add("microsoft", "company", 2);
  h.add("google", "company", 1);
  h.add("jaguar", "animal", 1);
  h.add("python", "snake", 1);
  h.add("apple", "company", 1);

  const std::vector<cluster::SenseCluster> clusters = {
      {"jaguar", 0, {{"leopard", 5}, {"lion", 4}, {"tiger", 3}, {"cougar", 2}}},
      {"jaguar", 1, {{"bmw", 5}, {"audi", 4}, {"porsche", 3}}},
      {"python", 0, {{"java", 4}, {"ruby", 3}, {"perl", 2}}},
      {"python", 1, {{"cobra", 4}, {"viper", 3}}},
      {"apple", 0, {{"pear", 3}, {"banana", 2}, {"mango", 1}}},
      {"apple", 1, {{"microsoft", 3}, {"google", 2}}},
  };
  dt::Thesaurus::Lists lists;
  for (const auto& c : clusters) {
    for (const auto& m : c.members) lists[c.word].push_back({m.word, m.weight});
    data.inventory[c.word].push_back(senses::make_entry(c, data.hearst, data.word_vectors, 3, 10000));
  }
  for (auto& [word, list] : lists) {
    std::stable_sort(list.begin(), list.end(), [](const dt::Neighbor& a, const dt::Neighbor& b) {
      return a.similarity != b.similarity ? a.similarity > b.similarity : a.word < b.word;
    });
  }
  data.thesaurus = dt::Thesaurus(std::move(lists));

  data.inventory["jaguar"][0].examples = {{"The jaguar stalked its prey through the jungle .", 0.5}};
  data.inventory["jaguar"][1].examples = {{"The dealer sold a jaguar with a new engine .", 0.4},
                                          {"A jaguar is a luxury car .", 0.25}};

  data.classes.push_back(senses::make_class(0, {{"jaguar", 0}, {"python", 1}}, data.word_vectors, data.hearst, 3, 10000));
  data.classes.push_back(senses::make_class(1, {{"apple", 1}, {"jaguar", 1}}, data.word_vectors, data.hearst, 3, 10000));
  return data;
}

}  // namespace egowsd::testing
