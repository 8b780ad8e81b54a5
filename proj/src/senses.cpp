#include "egowsd/senses.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_map>
#include <unordered_set>

#include "egowsd/errors.hpp"
#include "egowsd/parallel.hpp"

namespace egowsd::senses {

SenseRef SenseRef::parse(std::string_view text) {
  auto hash = text.rfind('#');
  if (hash == std::string_view::npos || hash == 0 || hash + 1 == text.size()) {
    throw Error("malformed sense reference: " + std::string(text));
  }
  std::size_t id = 0;
  auto digits = text.substr(hash + 1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), id);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw Error("malformed sense reference: " + std::string(text));
  }
  return {std::string(text.substr(0, hash)), id};
}

FeatureVector cluster_vector(const WeightedWords& members) {
  std::vector<FeatureVector::Entry> entries;
  entries.reserve(members.size());
  for (const auto& m : members) entries.emplace_back(m.word, m.weight);
  return FeatureVector(std::move(entries));
}

namespace {

FeatureVector sum_vectors(const std::vector<std::pair<const FeatureVector*, double>>& parts, std::size_t vec_cap) {
  std::unordered_map<std::string, double> acc;
  for (const auto& [vec, scale] : parts) {
    for (const auto& [feature, w] : vec->entries()) acc[feature] += scale * w;
  }
  return FeatureVector::from_range(acc).top(vec_cap).normalized();
}

}  // namespace

FeatureVector aggregate_context_vec(const cluster::SenseCluster& sense, const dt::WordVectors& word_vecs,
                                    std::size_t vec_cap) {
  std::vector<std::pair<const FeatureVector*, double>> parts;
  for (const auto& m : sense.members) {
    auto it = word_vecs.find(m.word);
    if (it != word_vecs.end()) parts.emplace_back(&it->second, m.weight);
  }
  return sum_vectors(parts, vec_cap);
}

SenseEntry make_entry(const cluster::SenseCluster& sense, const hypernymy::HypernymCounts& counts,
                      const dt::WordVectors& word_vecs, std::size_t k_hyper, std::size_t vec_cap) {
  SenseEntry entry;
  entry.word = sense.word;
  entry.sense_id = sense.sense_id;
  entry.members = sense.members;
  entry.hypernyms = hypernymy::label_sense(sense, counts, k_hyper);
  entry.cluster_vec = cluster_vector(sense.members);
  entry.context_vec = aggregate_context_vec(sense, word_vecs, vec_cap);
  return entry;
}

cluster::WeightedGraph build_sense_graph(const Inventory& inventory, std::size_t jobs) {
  struct Edge {
    std::string from;
    std::string to;
    double weight;
  };

  std::vector<const SenseEntry*> all;
  for (const auto& [_, entries] : inventory) {
    for (const auto& e : entries) all.push_back(&e);
  }

  std::vector<std::vector<Edge>> edges(all.size());
  parallel_for(all.size(), jobs, [&](std::size_t i) {
    const SenseEntry& sense = *all[i];
    std::unordered_set<std::string> context{sense.word};
    for (const auto& m : sense.members) context.insert(m.word);
    for (const auto& member : sense.members) {
      auto it = inventory.find(member.word);
      if (it == inventory.end() || it->second.empty()) continue;
      std::size_t best_id = 0;
      std::size_t best_overlap = 0;
      bool first = true;
      for (const auto& candidate : it->second) {
        std::size_t overlap = context.count(candidate.word);
        for (const auto& m : candidate.members) overlap += context.count(m.word);
        if (first || overlap > best_overlap) {
          best_overlap = overlap;
          best_id = candidate.sense_id;
          first = false;
        }
      }
      edges[i].push_back({sense.ref().str(), SenseRef{member.word, best_id}.str(), member.weight});
    }
  });

  cluster::WeightedGraph graph;
  for (const auto* e : all) graph.add_node(e->ref().str());
  for (const auto& list : edges) {
    for (const auto& e : list) graph.add_edge(e.from, e.to, e.weight);
  }
  return graph;
}

SemanticClass make_class(std::size_t class_id, std::vector<SenseRef> member_senses, const dt::WordVectors& word_vecs,
                         const hypernymy::HypernymCounts& counts, std::size_t k_hyper, std::size_t vec_cap) {
  SemanticClass c;
  c.class_id = class_id;
  std::sort(member_senses.begin(), member_senses.end());
  c.member_senses = std::move(member_senses);
  for (const auto& ref : c.member_senses) c.member_words.push_back(ref.word);
  c.member_words.erase(std::unique(c.member_words.begin(), c.member_words.end()), c.member_words.end());
  c.hypernyms = hypernymy::label_class(c.member_words, counts, k_hyper);

  std::vector<FeatureVector::Entry> unit;
  for (const auto& w : c.member_words) unit.emplace_back(w, 1.0);
  c.cluster_vec = FeatureVector(std::move(unit));

  // Mean of member word vectors; the 1/n factor vanishes under normalization.
  std::vector<std::pair<const FeatureVector*, double>> parts;
  for (const auto& w : c.member_words) {
    auto it = word_vecs.find(w);
    if (it != word_vecs.end()) parts.emplace_back(&it->second, 1.0);
  }
  c.context_vec = sum_vectors(parts, vec_cap);
  return c;
}

std::vector<SemanticClass> build_semantic_classes(const cluster::WeightedGraph& sense_graph,
                                                  const dt::WordVectors& word_vecs,
                                                  const hypernymy::HypernymCounts& counts, const ClassParams& params) {
  if (sense_graph.size() == 0) return {};
  auto partition = cluster::chinese_whispers(sense_graph, params.seed, params.max_iter);

  std::vector<std::vector<SenseRef>> groups;
  for (const auto& [_, members] : partition.clusters) {
    if (members.size() < std::max<std::size_t>(1, params.min_class_size)) continue;
    std::vector<SenseRef> refs;
    for (const auto& id : members) refs.push_back(SenseRef::parse(id));
    std::sort(refs.begin(), refs.end());
    groups.push_back(std::move(refs));
  }
  std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() > b.size() : a.front() < b.front();
  });

  std::vector<SemanticClass> classes;
  classes.reserve(groups.size());
  for (auto& refs : groups) {
    classes.push_back(make_class(classes.size(), std::move(refs), word_vecs, counts, params.k_hyper, params.vec_cap));
  }
  return classes;
}

}  // namespace egowsd::senses
