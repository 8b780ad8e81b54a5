#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "egowsd/clustering.hpp"
#include "egowsd/corpus.hpp"
#include "egowsd/disambiguation.hpp"
#include "egowsd/errors.hpp"
#include "egowsd/evaluation.hpp"
#include "egowsd/parallel.hpp"
#include "egowsd/pipeline.hpp"
#include "egowsd/store.hpp"

namespace py = pybind11;
using namespace egowsd;

namespace {

py::list weighted(const WeightedWords& words) {
  py::list out;
  for (const auto& w : words) out.append(py::make_tuple(w.word, w.weight));
  return out;
}

py::dict sense_dict(const senses::SenseEntry& e) {
  py::dict d;
  d["sense"] = e.ref().str();
  d["word"] = e.word;
  d["sense_id"] = e.sense_id;
  d["members"] = weighted(e.members);
  d["hypernyms"] = weighted(e.hypernyms);
  py::list clues;
  for (const auto& [feature, weight] : e.context_vec.top(10).ranked()) clues.append(py::make_tuple(feature, weight));
  d["context_clues"] = clues;
  py::list examples;
  for (const auto& ex : e.examples) examples.append(py::make_tuple(ex.sentence, ex.confidence));
  d["examples"] = examples;
  return d;
}

py::dict prediction_dict(const Model& model, const wsd::Prediction& p) {
  py::list ranked;
  for (const auto& r : p.ranked) {
    py::list common;
    for (const auto& c : r.common_features) common.append(py::make_tuple(c.feature, c.context_weight, c.sense_weight));
    py::dict item;
    item["sense"] = r.sense.str();
    item["sense_id"] = r.sense.id;
    item["score"] = r.score;
    item["hypernyms"] = weighted(wsd::candidate_hypernyms(model, r.sense));
    item["common_features"] = common;
    ranked.append(item);
  }
  py::dict d;
  d["word"] = p.word;
  d["model_id"] = p.model_id.str();
  d["confidence"] = p.confidence;
  d["fallback_used"] = p.fallback_used;
  d["ranked"] = ranked;
  return d;
}

std::vector<std::pair<std::string, std::string>> config_pairs(const py::dict& config) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& [key, value] : config) pairs.emplace_back(py::str(key), py::str(value));
  return pairs;
}

}  // namespace

PYBIND11_MODULE(_egowsd, m) {
  m.doc() = "Unsupervised, interpretable word sense disambiguation";
  m.attr("__version__") = "0.3.0";

  auto error = py::register_exception<Error>(m, "EgowsdError", PyExc_RuntimeError);
  py::register_exception<UnknownWordError>(m, "UnknownWordError", error);
  py::register_exception<ModelNotLoadedError>(m, "ModelNotLoadedError", error);
  py::register_exception<IncompleteModelError>(m, "IncompleteModelError", error);
  py::register_exception<ParseError>(m, "ParseError", error);

  m.def("fold_case", &corpus::fold_case, py::arg("text"));
  m.def(
      "tokenize",
      [](const std::string& text) {
        py::list out;
        for (const auto& t : corpus::tokenize(text)) {
          out.append(py::make_tuple(t.surface, t.norm, t.offset.begin, t.offset.end, t.is_stopword));
        }
        return out;
      },
      py::arg("text"), "(surface, norm, byte_begin, byte_end, is_stopword) per token");

  m.def(
      "chinese_whispers",
      [](const std::vector<std::tuple<std::string, std::string, double>>& edges, const std::vector<std::string>& nodes,
         std::uint64_t seed, std::size_t max_iter) {
        cluster::WeightedGraph g;
        for (const auto& n : nodes) g.add_node(n);
        for (const auto& [u, v, w] : edges) g.add_edge(u, v, w);
        return cluster::chinese_whispers(g, seed, max_iter).assignment;
      },
      py::arg("edges"), py::arg("nodes") = std::vector<std::string>{}, py::arg("seed") = 0, py::arg("max_iter") = 20);

  py::class_<Model>(m, "Model")
      .def_static("load", [](const std::filesystem::path& dir) { return store::load_model(dir); }, py::arg("path"))
      .def("words",
           [](const Model& model) {
             std::vector<std::string> out;
             for (const auto& [w, _] : model.data().inventory) out.push_back(w);
             return out;
           })
      .def("senses",
           [](const Model& model, const std::string& word) {
             py::list out;
             for (const auto& e : model.senses_of(corpus::fold_case(word))) out.append(sense_dict(e));
             return out;
           },
           py::arg("word"))
      .def("class_count", [](const Model& model) { return model.data().classes.size(); })
      .def("sense_count", [](const Model& model) { return model.data().sense_count(); })
      .def("save", [](const Model& model, const std::filesystem::path& dir) { store::save_model(model.data(), dir); },
           py::arg("path"))
      .def("predict",
           [](const Model& model, const std::string& word, const std::string& context, const std::string& model_id,
              std::uint64_t seed) {
             return prediction_dict(model, wsd::disambiguate(word, context, wsd::ModelId::parse(model_id), model, seed));
           },
           py::arg("word"), py::arg("context"), py::arg("model_id") = "words-context", py::arg("seed") = 0)
      .def("predict_all",
           [](const Model& model, const std::string& text, const std::string& model_id) {
             py::list out;
             for (const auto& a : wsd::disambiguate_all(text, wsd::ModelId::parse(model_id), model)) {
               py::dict d;
               d["token_index"] = a.token_index;
               d["word"] = a.word;
               d["byte_begin"] = a.span.begin;
               d["byte_end"] = a.span.end;
               d["prediction"] = prediction_dict(model, a.prediction);
               out.append(d);
             }
             return out;
           },
           py::arg("text"), py::arg("model_id") = "words-context")
      .def("trace",
           [](const Model& model, const std::string& sense, const std::string& feature) {
             return weighted(wsd::trace_feature(wsd::Candidate::parse(sense), feature, model));
           },
           py::arg("sense"), py::arg("feature"))
      .def("evaluate",
           [](const Model& model, const std::filesystem::path& dataset, const std::string& model_id,
              std::uint64_t seed) {
             auto report =
                 eval::run_evaluation(eval::load_dataset(dataset), model, wsd::ModelId::parse(model_id), seed);
             py::dict d;
             d["model_id"] = report.model_id;
             d["n_total"] = report.n_total;
             d["n_evaluated"] = report.n_evaluated;
             d["n_unknown"] = report.n_unknown;
             d["acc_hypers"] = report.acc_hypers;
             d["acc_hyperhypers"] = report.acc_hyperhypers;
             return d;
           },
           py::arg("dataset"), py::arg("model_id") = "words-context", py::arg("seed") = 0);

  m.def(
      "build",
      [](const std::filesystem::path& corpus_path, const std::filesystem::path& out_dir, const py::dict& config,
         std::size_t jobs) {
        auto cfg = PipelineConfig::from_pairs(config_pairs(config));
        ModelData data;
        {
          py::gil_scoped_release release;
          data = build(corpus_path, out_dir, cfg, jobs == 0 ? default_jobs() : jobs);
        }
        return Model(std::move(data));
      },
      py::arg("corpus"), py::arg("out"), py::arg("config") = py::dict(), py::arg("jobs") = 0);
}
