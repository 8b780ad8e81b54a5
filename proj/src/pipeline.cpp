#include "egowsd/pipeline.hpp"

#include <chrono>
#include <set>

#include "egowsd/clustering.hpp"
#include "egowsd/disambiguation.hpp"
#include "egowsd/errors.hpp"
#include "egowsd/hypernymy.hpp"
#include "egowsd/senses.hpp"
#include "egowsd/store.hpp"
#include "egowsd/thesaurus.hpp"

namespace egowsd {

namespace {

template <class Fn>
void run_stage(const char* name, const StageCallback& on_stage, Fn&& fn) {
  auto start = std::chrono::steady_clock::now();
  std::string summary;
  try {
    summary = fn();
  } catch (const std::exception& e) {
    throw Error(std::string(name) + ": " + e.what());
  }
  if (on_stage) {
    std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    on_stage({name, elapsed.count(), std::move(summary)});
  }
}

}  // namespace

ModelData build_model(std::span<const corpus::Sentence> sentences, const PipelineConfig& config, std::size_t jobs,
                      const StageCallback& on_stage) {
  config.validate();
  if (sentences.empty()) throw Error("corpus: no sentences");

  ModelData data;
  data.config = config;
  std::set<std::string> docs;
  for (const auto& s : sentences) {
    docs.insert(s.doc_id);
    data.stats.tokens += s.tokens.size();
  }
  data.stats.documents = docs.size();
  data.stats.sentences = sentences.size();

  run_stage("dt", on_stage, [&] {
    auto counts = dt::extract_cooccurrences(sentences, config.window, config.min_word_freq, jobs);
    if (counts.total == 0) throw Error("no co-occurrences (corpus too small for min_word_freq)");
    data.word_vectors = dt::prune_features(dt::weight_lmi(counts, jobs), config.p);
    data.thesaurus = dt::build_thesaurus(data.word_vectors, config.n_max, jobs);
    return std::to_string(data.word_vectors.size()) + " words, " + std::to_string(data.thesaurus.row_count()) +
           " neighbour rows";
  });

  std::map<std::string, std::vector<cluster::SenseCluster>> clusters;
  run_stage("senses", on_stage, [&] {
    cluster::InductionParams params;
    params.n_ego = config.n_ego;
    params.n_inner = config.n_inner;
    params.max_iter = config.max_iter;
    params.min_cluster_size = config.min_cluster_size;
    params.seed = config.seed;
    clusters = cluster::induce_all(data.thesaurus, params, jobs);
    std::size_t n = 0;
    for (const auto& [_, list] : clusters) n += list.size();
    return std::to_string(clusters.size()) + " words, " + std::to_string(n) + " senses";
  });

  run_stage("hypernyms", on_stage, [&] {
    data.hearst = hypernymy::extract_hypernym_pairs(sentences, jobs);
    return std::to_string(data.hearst.size()) + " isa pairs";
  });

  run_stage("vectors", on_stage, [&] {
    for (const auto& [word, list] : clusters) {
      auto& entries = data.inventory[word];
      for (const auto& c : list) {
        entries.push_back(senses::make_entry(c, data.hearst, data.word_vectors, config.k_hyper, config.vec_cap));
      }
    }
    return std::to_string(data.sense_count()) + " sense vectors";
  });

  run_stage("classes", on_stage, [&] {
    auto graph = senses::build_sense_graph(data.inventory, jobs);
    senses::ClassParams params;
    params.seed = config.seed;
    params.max_iter = config.max_iter;
    params.min_class_size = config.min_class_size;
    params.k_hyper = config.k_hyper;
    params.vec_cap = config.vec_cap;
    data.classes = senses::build_semantic_classes(graph, data.word_vectors, data.hearst, params);
    return std::to_string(data.classes.size()) + " classes";
  });

  run_stage("examples", on_stage, [&] {
    wsd::attach_usage_examples(data, sentences, config.k_examples, jobs);
    std::size_t n = 0;
    for (const auto& [_, entries] : data.inventory) {
      for (const auto& e : entries) n += e.examples.size();
    }
    return std::to_string(n) + " usage examples";
  });

  return data;
}

ModelData build(const std::filesystem::path& corpus_path, const std::filesystem::path& out_dir,
                const PipelineConfig& config, std::size_t jobs, const StageCallback& on_stage) {
  std::vector<corpus::Sentence> sentences;
  run_stage("corpus", on_stage, [&] {
    corpus::CorpusConfig cc;
    cc.mode = config.doc_mode;
    sentences = corpus::load_corpus(corpus_path, cc);
    return std::to_string(sentences.size()) + " sentences";
  });
  auto data = build_model(sentences, config, jobs, on_stage);
  run_stage("store", on_stage, [&] {
    store::save_model(data, out_dir);
    return out_dir.string();
  });
  return data;
}

}  // namespace egowsd
