#include "egowsd/clustering.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "egowsd/errors.hpp"
#include "egowsd/parallel.hpp"
#include "egowsd/random.hpp"

namespace egowsd::cluster {

std::size_t WeightedGraph::add_node(const std::string& id) {
  auto [it, inserted] = index_.emplace(id, nodes_.size());
  if (inserted) {
    nodes_.push_back(id);
    adj_.emplace_back();
  }
  return it->second;
}

void WeightedGraph::add_edge(const std::string& u, const std::string& v, double weight) {
  if (!(weight > 0.0)) throw Error("edge weight must be positive: " + u + " -- " + v);
  if (u == v) return;
  std::size_t a = add_node(u);
  std::size_t b = add_node(v);
  auto merge = [weight](std::map<std::size_t, double>& row, std::size_t key) {
    auto [it, inserted] = row.emplace(key, weight);
    if (!inserted) it->second = std::max(it->second, weight);
  };
  merge(adj_[a], b);
  merge(adj_[b], a);
}

std::size_t WeightedGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& row : adj_) n += row.size();
  return n / 2;
}

std::optional<std::size_t> WeightedGraph::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double WeightedGraph::weight(const std::string& u, const std::string& v) const {
  auto a = index_of(u);
  auto b = index_of(v);
  if (!a || !b) return 0.0;
  auto it = adj_[*a].find(*b);
  return it == adj_[*a].end() ? 0.0 : it->second;
}

Partition chinese_whispers(const WeightedGraph& graph, std::uint64_t seed, std::size_t max_iter) {
  if (max_iter == 0) throw Error("chinese_whispers: max_iter must be >= 1");
  const std::size_t n = graph.size();

  // Canonical node order (by id) so the outcome ignores insertion order.
  std::vector<std::size_t> by_rank(n);
  std::iota(by_rank.begin(), by_rank.end(), 0);
  std::sort(by_rank.begin(), by_rank.end(),
            [&](std::size_t a, std::size_t b) { return graph.nodes()[a] < graph.nodes()[b]; });
  std::vector<std::size_t> rank_of(n);
  for (std::size_t r = 0; r < n; ++r) rank_of[by_rank[r]] = r;

  struct Arc {
    std::size_t to;
    double weight;
    std::size_t shared;  // neighbours common to both endpoints
  };
  std::vector<std::vector<Arc>> adj(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (const auto& [other, w] : graph.adjacent(by_rank[r])) adj[r].push_back({rank_of[other], w, 0});
    std::sort(adj[r].begin(), adj[r].end(), [](const Arc& a, const Arc& b) { return a.to < b.to; });
  }
  {
    std::vector<char> mark(n, 0);
    for (std::size_t r = 0; r < n; ++r) {
      for (const auto& arc : adj[r]) mark[arc.to] = 1;
      for (auto& arc : adj[r]) {
        for (const auto& second : adj[arc.to]) arc.shared += mark[second.to];
      }
      for (const auto& arc : adj[r]) mark[arc.to] = 0;
    }
  }

  std::vector<std::size_t> label(n);
  std::iota(label.begin(), label.end(), 0);
  std::vector<std::size_t> order(label);
  std::mt19937_64 rng(seed);
  std::vector<double> score(n, 0.0);
  std::vector<std::size_t> support(n, 0);
  std::vector<std::size_t> seen;

  for (std::size_t pass = 0; pass < max_iter; ++pass) {
    shuffle(order, rng);
    bool changed = false;
    for (std::size_t node : order) {
      if (adj[node].empty()) continue;
      seen.clear();
      for (const auto& arc : adj[node]) {
        std::size_t l = label[arc.to];
        if (score[l] == 0.0) seen.push_back(l);
        score[l] += arc.weight;
        support[l] += arc.shared;
      }
      std::size_t best = seen.front();
      for (std::size_t l : seen) {
        if (score[l] != score[best]) {
          if (score[l] > score[best]) best = l;
        } else if (support[l] != support[best]) {
          if (support[l] > support[best]) best = l;
        } else if (l < best) {
          best = l;
        }
      }
      for (std::size_t l : seen) {
        score[l] = 0.0;
        support[l] = 0;
      }
      if (best != label[node]) {
        label[node] = best;
        changed = true;
      }
    }
    if (!changed) break;
  }

  Partition out;
  for (std::size_t r = 0; r < n; ++r) {
    const auto& id = graph.nodes()[by_rank[r]];
    out.assignment.emplace(id, label[r]);
    out.clusters[label[r]].push_back(id);
  }
  return out;
}

WeightedGraph build_ego_network(const std::string& word, const dt::Thesaurus& thesaurus, std::size_t n_ego,
                                std::size_t n_inner) {
  const auto& ego = thesaurus.neighbors(word);
  WeightedGraph graph;
  std::size_t count = std::min(n_ego, ego.size());
  for (std::size_t i = 0; i < count; ++i) {
    if (ego[i].word != word) graph.add_node(ego[i].word);
  }
  for (std::size_t i = 0; i < count; ++i) {
    const auto& u = ego[i].word;
    if (u == word || !thesaurus.contains(u)) continue;
    const auto& inner = thesaurus.neighbors(u);
    std::size_t limit = std::min(n_inner, inner.size());
    for (std::size_t j = 0; j < limit; ++j) {
      const auto& v = inner[j];
      if (v.word == u || v.word == word || !graph.index_of(v.word)) continue;
      graph.add_edge(u, v.word, v.similarity);
    }
  }
  return graph;
}

std::vector<SenseCluster> induce_senses(const std::string& word, const dt::Thesaurus& thesaurus,
                                        const InductionParams& params) {
  auto graph = build_ego_network(word, thesaurus, params.n_ego, params.n_inner);
  auto partition = chinese_whispers(graph, params.seed, params.max_iter);

  std::vector<WeightedWords> clusters;
  for (const auto& [_, members] : partition.clusters) {
    if (members.size() < std::max<std::size_t>(1, params.min_cluster_size)) continue;
    WeightedWords cluster;
    for (const auto& m : members) {
      double w = thesaurus.similarity(word, m);
      if (w > 0.0) cluster.push_back({m, w});
    }
    if (cluster.empty()) continue;
    std::sort(cluster.begin(), cluster.end(), [](const WeightedWord& a, const WeightedWord& b) {
      return a.weight != b.weight ? a.weight > b.weight : a.word < b.word;
    });
    clusters.push_back(std::move(cluster));
  }

  auto smallest = [](const WeightedWords& c) {
    return std::min_element(c.begin(), c.end(), [](auto& a, auto& b) { return a.word < b.word; })->word;
  };
  std::sort(clusters.begin(), clusters.end(), [&](const WeightedWords& a, const WeightedWords& b) {
    return a.size() != b.size() ? a.size() > b.size() : smallest(a) < smallest(b);
  });

  std::vector<SenseCluster> senses;
  for (auto& members : clusters) senses.push_back({word, senses.size(), std::move(members)});
  return senses;
}

std::map<std::string, std::vector<SenseCluster>> induce_all(const dt::Thesaurus& thesaurus,
                                                            const InductionParams& params, std::size_t jobs) {
  std::vector<const std::string*> words;
  for (const auto& [word, _] : thesaurus.lists()) words.push_back(&word);
  std::vector<std::vector<SenseCluster>> results(words.size());
  parallel_for(words.size(), jobs, [&](std::size_t i) { results[i] = induce_senses(*words[i], thesaurus, params); });
  std::map<std::string, std::vector<SenseCluster>> out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!results[i].empty()) out.emplace(*words[i], std::move(results[i]));
  }
  return out;
}

}  // namespace egowsd::cluster
