#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "egowsd/thesaurus.hpp"
#include "egowsd/types.hpp"

namespace egowsd::cluster {

/// Undirected graph with positive edge weights and no self-loops. Adding an
/// existing edge keeps the larger weight.
class WeightedGraph {
 public:
  std::size_t add_node(const std::string& id);
  void add_edge(const std::string& u, const std::string& v, double weight);

  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const;
  const std::vector<std::string>& nodes() const noexcept { return nodes_; }
  std::optional<std::size_t> index_of(const std::string& id) const;
  const std::map<std::size_t, double>& adjacent(std::size_t node) const { return adj_.at(node); }

  /// 0 when the nodes are not connected.
  double weight(const std::string& u, const std::string& v) const;

 private:
  std::vector<std::string> nodes_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::map<std::size_t, double>> adj_;
};

/// Cluster labels are the lexicographic rank of the node that started with
/// that label.
struct Partition {
  std::map<std::string, std::size_t> assignment;
  std::map<std::size_t, std::vector<std::string>> clusters;

  friend bool operator==(const Partition&, const Partition&) = default;
};

/// Chinese Whispers label propagation.
///
/// Every node starts with its own label. Each pass visits the nodes in a
/// seeded random order, and a node takes the label with the largest summed
/// edge weight among its neighbours; isolated nodes keep theirs. Equal
/// sums go to the label whose holders share more neighbours with the node
/// (summed common-neighbour counts), then to the smallest label. Stops after
/// `max_iter` passes or the first pass that changes nothing. Node insertion
/// order does not affect the result.
Partition chinese_whispers(const WeightedGraph& graph, std::uint64_t seed, std::size_t max_iter);

struct InductionParams {
  std::size_t n_ego = 200;
  std::size_t n_inner = 50;
  std::size_t max_iter = 20;
  std::size_t min_cluster_size = 2;
  std::uint64_t seed = 42;
};

struct SenseCluster {
  std::string word;
  std::size_t sense_id = 0;
  WeightedWords members;  // weight descending, then word ascending

  friend bool operator==(const SenseCluster&, const SenseCluster&) = default;
};

/// Graph over the `n_ego` nearest neighbours of `word` (the word itself
/// excluded). u and v are joined when v is among u's top `n_inner`
/// neighbours (or the reverse), weighted by their similarity.
WeightedGraph build_ego_network(const std::string& word, const dt::Thesaurus& thesaurus, std::size_t n_ego,
                                std::size_t n_inner);

/// Clusters the ego network of `word` into senses. Clusters smaller than
/// `min_cluster_size` are discarded; sense ids follow decreasing cluster size.
std::vector<SenseCluster> induce_senses(const std::string& word, const dt::Thesaurus& thesaurus,
                                        const InductionParams& params);

/// Senses for every thesaurus word; words left without senses are omitted.
std::map<std::string, std::vector<SenseCluster>> induce_all(const dt::Thesaurus& thesaurus,
                                                            const InductionParams& params, std::size_t jobs = 1);

}  // namespace egowsd::cluster
