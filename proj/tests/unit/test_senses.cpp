#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "egowsd/errors.hpp"
#include "egowsd/senses.hpp"

using namespace egowsd;
using namespace egowsd::senses;

namespace {

SenseEntry entry(const std::string& word, std::size_t id, WeightedWords members) {
  return make_entry({word, id, std::move(members)}, {}, {}, 3, 10000);
}

// Weighted sum computed feature by feature, capped and normalized.
std::map<std::string, double> reference_aggregate(const cluster::SenseCluster& s, const dt::WordVectors& vecs,
                                                  std::size_t cap) {
  std::map<std::string, long double> sum;
  for (const auto& m : s.members) {
    if (!vecs.count(m.word)) continue;
    for (const auto& [f, w] : vecs.at(m.word).entries()) sum[f] += static_cast<long double>(m.weight) * w;
  }
  std::vector<std::pair<std::string, long double>> ranked(sum.begin(), sum.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (ranked.size() > cap) ranked.resize(cap);
  long double norm = 0;
  for (const auto& [_, w] : ranked) norm += w * w;
  norm = std::sqrt(norm);
  std::map<std::string, double> out;
  for (const auto& [f, w] : ranked) out[f] = static_cast<double>(w / norm);
  return out;
}

}  // namespace

TEST_SUITE("senses") {
  TEST_CASE("SenseRef parse and format") {
    CHECK(SenseRef::parse("jaguar#1") == SenseRef{"jaguar", 1});
    CHECK(SenseRef{"python", 0}.str() == "python#0");
    CHECK_THROWS_AS(SenseRef::parse("jaguar"), Error);
    CHECK_THROWS_AS(SenseRef::parse("jaguar#x"), Error);
    CHECK_THROWS_AS(SenseRef::parse("#1"), Error);
  }

  TEST_CASE("aggregate_context_vec: documented examples") {
    dt::WordVectors vecs = {{"a", FeatureVector({{"x", 3}, {"y", 4}})}, {"b", FeatureVector({{"z", 5}})}};
    auto v = aggregate_context_vec({"w", 0, {{"a", 1.0}}}, vecs, 10000);
    CHECK(v.weight("x") == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(v.weight("y") == doctest::Approx(0.8).epsilon(1e-12));

    auto u = aggregate_context_vec({"w", 0, {{"a", 2.0}, {"b", 2.0}}}, vecs, 10000);
    double n = std::sqrt(9.0 + 16.0 + 25.0);
    CHECK(u.weight("x") == doctest::Approx(3 / n).epsilon(1e-12));
    CHECK(u.weight("z") == doctest::Approx(5 / n).epsilon(1e-12));

    CHECK(aggregate_context_vec({"w", 0, {{"nobody", 1.0}}}, vecs, 10000).empty());
  }

  TEST_CASE("oracle: aggregation equals a feature-by-feature reference") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
      dt::WordVectors vecs;
      cluster::SenseCluster s{"w", 0, {}};
      for (int m = 0; m < 8; ++m) {
        std::vector<FeatureVector::Entry> e;
        for (int k = 0; k < 6; ++k) e.emplace_back("f" + std::to_string(rng() % 30), 0.5 + (rng() % 1000) / 10.0);
        std::string word = "m" + std::to_string(m);
        if (rng() % 4) vecs[word] = FeatureVector(std::move(e));
        s.members.push_back({word, 1.0 + (rng() % 100) / 7.0});
      }
      std::size_t cap = 1 + rng() % 40;
      auto got = aggregate_context_vec(s, vecs, cap);
      auto want = reference_aggregate(s, vecs, cap);
      REQUIRE(got.size() == want.size());
      for (const auto& [f, w] : got.entries()) CHECK(std::abs(w - want.at(f)) <= 1e-9);
      if (!got.empty()) CHECK(std::abs(got.norm() - 1.0) <= 1e-9);
    }
  }

  TEST_CASE("make_entry: cluster_vec support is the member set") {
    auto e = entry("jaguar", 0, {{"leopard", 0.9}, {"lion", 0.5}});
    CHECK(e.cluster_vec == FeatureVector({{"leopard", 0.9}, {"lion", 0.5}}));
    CHECK(e.context_vec.empty());
    CHECK(e.ref() == SenseRef{"jaguar", 0});
  }

  TEST_CASE("sense graph: documented examples") {
    Inventory inv;
    inv["jaguar"] = {entry("jaguar", 0, {{"leopard", 0.9}})};
    inv["leopard"] = {entry("leopard", 0, {{"jaguar", 0.5}, {"lion", 1}}), entry("leopard", 1, {{"print", 1}, {"fur", 1}})};
    auto g = build_sense_graph(inv);
    CHECK(g.size() == 3);
    CHECK(g.weight("jaguar#0", "leopard#0") == 0.9);
    CHECK(g.weight("jaguar#0", "leopard#1") == 0.0);

    Inventory lonely;
    lonely["jaguar"] = {entry("jaguar", 0, {{"nothing", 1.0}})};
    auto h = build_sense_graph(lonely);
    CHECK(h.size() == 1);
    CHECK(h.edge_count() == 0);
  }

  TEST_CASE("sense graph: ties go to the smaller sense id, parallel edges keep the maximum") {
    Inventory inv;
    inv["a"] = {entry("a", 0, {{"b", 0.3}})};
    inv["b"] = {entry("b", 0, {{"x", 1}}), entry("b", 1, {{"y", 1}})};
    auto g = build_sense_graph(inv);
    CHECK(g.weight("a#0", "b#0") == 0.3);
    CHECK(g.weight("a#0", "b#1") == 0.0);

    Inventory mutual;
    mutual["a"] = {entry("a", 0, {{"b", 0.3}})};
    mutual["b"] = {entry("b", 0, {{"a", 0.7}})};
    CHECK(build_sense_graph(mutual).weight("a#0", "b#0") == 0.7);
  }

  TEST_CASE("semantic classes: documented examples") {
    cluster::WeightedGraph g;
    g.add_edge("a#0", "b#0", 1.0);
    g.add_edge("c#0", "d#1", 1.0);
    auto classes = build_semantic_classes(g, {}, {}, {});
    REQUIRE(classes.size() == 2);
    CHECK(classes[0].member_senses == std::vector<SenseRef>{{"a", 0}, {"b", 0}});
    CHECK(classes[1].member_senses == std::vector<SenseRef>{{"c", 0}, {"d", 1}});
    CHECK(classes[1].class_id == 1);

    cluster::WeightedGraph isolated;
    isolated.add_node("a#0");
    isolated.add_node("b#0");
    CHECK(build_semantic_classes(isolated, {}, {}, {}).empty());
  }

  TEST_CASE("make_class: unit cluster vector, mean context vector, labels") {
    dt::WordVectors vecs = {{"a", FeatureVector({{"x", 2}})}, {"b", FeatureVector({{"y", 2}})}};
    hypernymy::HypernymCounts counts;
    counts.add("a", "thing", 2);
    counts.add("b", "thing", 1);
    auto c = make_class(7, {{"b", 1}, {"a", 0}, {"a", 2}}, vecs, counts, 3, 10000);
    CHECK(c.class_id == 7);
    CHECK(c.member_senses == std::vector<SenseRef>{{"a", 0}, {"a", 2}, {"b", 1}});
    CHECK(c.member_words == std::vector<std::string>{"a", "b"});
    CHECK(c.cluster_vec == FeatureVector({{"a", 1}, {"b", 1}}));
    CHECK(c.context_vec.weight("x") == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(c.hypernyms == hypernymy::HypernymLabels{{"thing", 3}});
  }

  TEST_CASE("property: sense graph nodes equal inventory senses, no self-edges; class invariants") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 50; ++trial) {
      Inventory inv;
      dt::WordVectors vecs;
      std::vector<std::string> words;
      for (int w = 0; w < 15; ++w) words.push_back("w" + std::to_string(w));
      for (const auto& w : words) {
        vecs[w] = FeatureVector({{"f" + std::to_string(rng() % 10), 1.0 + rng() % 5}});
        if (rng() % 3 == 0) continue;
        for (std::size_t id = 0, n = 1 + rng() % 3; id < n; ++id) {
          WeightedWords members;
          std::set<std::string> used;
          for (int k = 0; k < 4; ++k) {
            const auto& m = words[rng() % words.size()];
            if (m != w && used.insert(m).second) members.push_back({m, 0.5 + rng() % 4});
          }
          if (members.empty()) members.push_back({w == "w0" ? "w1" : "w0", 1.0});
          inv[w].push_back(make_entry({w, id, members}, {}, vecs, 3, 10000));
        }
      }
      auto g = build_sense_graph(inv, 3);
      std::set<std::string> nodes(g.nodes().begin(), g.nodes().end()), expected;
      for (const auto& [_, entries] : inv) {
        for (const auto& e : entries) {
          expected.insert(e.ref().str());
          if (!e.context_vec.empty()) CHECK(std::abs(e.context_vec.norm() - 1.0) <= 1e-9);
          CHECK(e.cluster_vec.size() == e.members.size());
        }
      }
      CHECK(nodes == expected);
      for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.adjacent(i).count(i) == 0);

      ClassParams params;
      params.seed = trial;
      for (const auto& c : build_semantic_classes(g, vecs, {}, params)) {
        CHECK(c.member_senses.size() >= params.min_class_size);
        std::set<std::string> words_of;
        for (const auto& ref : c.member_senses) words_of.insert(ref.word);
        CHECK(std::vector<std::string>(words_of.begin(), words_of.end()) == c.member_words);
        CHECK(c.cluster_vec.size() == c.member_words.size());
        for (const auto& [f, w] : c.cluster_vec.entries()) CHECK(w == 1.0);
        if (!c.context_vec.empty()) CHECK(std::abs(c.context_vec.norm() - 1.0) <= 1e-9);
      }
    }
  }
}
