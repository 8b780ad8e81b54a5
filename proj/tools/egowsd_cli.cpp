// egowsd: build, query, evaluate and serve sense inventories.

#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "egowsd/disambiguation.hpp"
#include "egowsd/errors.hpp"
#include "egowsd/evaluation.hpp"
#include "egowsd/parallel.hpp"
#include "egowsd/pipeline.hpp"
#include "egowsd/service.hpp"
#include "egowsd/store.hpp"

namespace {

using namespace egowsd;

std::string labels(const WeightedWords& words, std::size_t k) {
  std::string out;
  for (std::size_t i = 0; i < words.size() && i < k; ++i) {
    if (i) out += ", ";
    out += words[i].word;
  }
  return out.empty() ? "-" : out;
}

std::string fixed(double v, int precision = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << v;
  return s.str();
}

void print_prediction(std::ostream& out, const Model& model, const wsd::Prediction& p) {
  const auto& best = p.best();
  out << p.word << "\t" << best.sense.str() << "\t" << labels(wsd::candidate_hypernyms(model, best.sense), 1) << "\n";
  out << "model " << p.model_id.str() << "  confidence " << fixed(p.confidence)
      << (p.fallback_used ? "  (no overlap, most frequent sense)" : "") << "\n";
  for (std::size_t i = 0; i < p.ranked.size(); ++i) {
    const auto& r = p.ranked[i];
    out << "  " << i + 1 << ". " << std::left << std::setw(16) << r.sense.str() << " score " << fixed(r.score)
        << "  isa: " << labels(wsd::candidate_hypernyms(model, r.sense), 3);
    if (!r.common_features.empty()) {
      out << "  clues: ";
      for (std::size_t j = 0; j < r.common_features.size() && j < 5; ++j) out << (j ? ", " : "") << r.common_features[j].feature;
    }
    out << "\n";
  }
}

int run_build(const std::string& corpus, const std::string& out, const std::string& config_file,
              std::optional<std::uint64_t> seed, std::size_t jobs) {
  PipelineConfig config = config_file.empty() ? PipelineConfig{} : PipelineConfig::from_file(config_file);
  if (seed) config.seed = *seed;
  config.validate();
  auto data = build(corpus, out, config, jobs, [](const StageReport& r) {
    std::cerr << std::left << std::setw(10) << r.stage << std::right << std::setw(9) << fixed(r.seconds, 3) << "s  "
              << r.summary << "\n";
  });
  std::cout << "model written to " << out << ": " << data.inventory.size() << " words, " << data.sense_count()
            << " senses, " << data.classes.size() << " classes\n";
  return 0;
}

int run_inspect(const std::string& dir, const std::string& word) {
  auto model = store::load_model(dir);
  auto folded = corpus::fold_case(word);
  const auto& entries = model.senses_of(folded);
  for (const auto& e : entries) {
    std::cout << e.ref().str() << "\n";
    std::cout << "  hypernyms: ";
    for (std::size_t i = 0; i < e.hypernyms.size(); ++i) {
      std::cout << (i ? ", " : "") << e.hypernyms[i].word << " (" << fixed(e.hypernyms[i].weight, 2) << ")";
    }
    if (e.hypernyms.empty()) std::cout << "-";
    std::cout << "\n  members (" << e.members.size() << "): ";
    for (std::size_t i = 0; i < e.members.size() && i < 20; ++i) std::cout << (i ? ", " : "") << e.members[i].word;
    if (e.members.size() > 20) std::cout << ", ...";
    std::cout << "\n  clues: ";
    auto clues = e.context_vec.top(10).ranked();
    for (std::size_t i = 0; i < clues.size(); ++i) std::cout << (i ? ", " : "") << clues[i].first;
    std::cout << "\n";
    for (const auto& ex : e.examples) std::cout << "  example [" << fixed(ex.confidence, 3) << "] " << ex.sentence << "\n";
  }
  for (auto id : model.classes_of(folded)) {
    const auto& c = model.class_by_id(id);
    std::cout << "class#" << id << " (" << c.member_senses.size() << " senses)  isa: " << labels(c.hypernyms, 3) << "\n";
  }
  return 0;
}

int run_serve(const std::string& config_file) {
  auto config = service::ApiConfig::from_file(config_file);
  config.apply_env();
  static service::Service* active = nullptr;
  service::Service svc(std::move(config));
  active = &svc;
  std::signal(SIGINT, [](int) { if (active) active->stop(); });
  std::signal(SIGTERM, [](int) { if (active) active->stop(); });
  svc.run([&](int port) {
    std::cerr << "serving " << svc.model_ids().size() << " models on port " << port << "\n";
  });
  active = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised, interpretable word sense disambiguation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "egowsd 0.3.0");

  std::size_t jobs = default_jobs();
  std::string corpus_path, out_dir, config_file, model_dir, word, context, text, text_file, dataset, report_file;
  std::string inventory = "words", features = "context";
  std::uint64_t seed = 0;

  auto* build_cmd = app.add_subcommand("build", "Induce a model from a corpus");
  build_cmd->add_option("--corpus", corpus_path, "Corpus file or directory")->required();
  build_cmd->add_option("--out", out_dir, "Output model directory")->required();
  build_cmd->add_option("--config", config_file, "Pipeline config (key<TAB>value)");
  auto* seed_opt = build_cmd->add_option("--seed", seed, "Random seed");
  build_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto add_model_choice = [&](CLI::App* cmd, bool baselines) {
    cmd->add_option("--inventory", inventory, "words or super")->check(CLI::IsMember({"words", "super"}));
    auto allowed = baselines ? std::vector<std::string>{"cluster", "context", "mfs", "random"}
                             : std::vector<std::string>{"cluster", "context"};
    cmd->add_option("--features", features, "Sense features")->check(CLI::IsMember(allowed));
  };

  auto* predict_cmd = app.add_subcommand("predict", "Disambiguate one word in context");
  predict_cmd->add_option("--model", model_dir, "Model directory")->required();
  predict_cmd->add_option("--word", word, "Target word")->required();
  predict_cmd->add_option("--context", context, "Context sentence")->required();
  add_model_choice(predict_cmd, true);

  auto* all_cmd = app.add_subcommand("predict-all", "Annotate every known word of a text");
  all_cmd->add_option("--model", model_dir, "Model directory")->required();
  auto* text_opt = all_cmd->add_option("--text", text, "Text to annotate");
  auto* file_opt = all_cmd->add_option("--file", text_file, "File to annotate")->check(CLI::ExistingFile);
  text_opt->excludes(file_opt);
  add_model_choice(all_cmd, false);

  auto* eval_cmd = app.add_subcommand("eval", "Hypernym-in-context evaluation");
  eval_cmd->add_option("--model", model_dir, "Model directory")->required();
  eval_cmd->add_option("--dataset", dataset, "Evaluation TSV")->required();
  eval_cmd->add_option("--seed", seed, "Seed of the random baseline");
  eval_cmd->add_option("--report", report_file, "Write key=value report here");
  eval_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  add_model_choice(eval_cmd, true);

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  serve_cmd->add_option("--config", config_file, "Service config")->required();

  auto* inspect_cmd = app.add_subcommand("inspect", "Print the senses of a word");
  inspect_cmd->add_option("--model", model_dir, "Model directory")->required();
  inspect_cmd->add_option("--word", word, "Word")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (*all_cmd && text_opt->count() == 0 && file_opt->count() == 0) {
    std::cerr << "predict-all: one of --text or --file is required\n" << all_cmd->help();
    return 1;
  }

  try {
    if (*build_cmd) {
      return run_build(corpus_path, out_dir, config_file, seed_opt->count() ? std::optional(seed) : std::nullopt, jobs);
    }
    if (*predict_cmd) {
      auto model = store::load_model(model_dir);
      auto p = wsd::disambiguate(word, context, wsd::ModelId::make(inventory, features), model, seed);
      print_prediction(std::cout, model, p);
      return 0;
    }
    if (*all_cmd) {
      if (!text_file.empty()) {
        std::ifstream in(text_file, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
      }
      auto model = store::load_model(model_dir);
      for (const auto& a : wsd::disambiguate_all(text, wsd::ModelId::make(inventory, features), model)) {
        const auto& best = a.prediction.best();
        std::cout << a.span.begin << "\t" << a.span.end << "\t" << a.word << "\t" << best.sense.str() << "\t"
                  << labels(wsd::candidate_hypernyms(model, best.sense), 1) << "\t" << fixed(a.prediction.confidence)
                  << "\n";
      }
      return 0;
    }
    if (*eval_cmd) {
      auto model = store::load_model(model_dir);
      auto rows = eval::load_dataset(dataset);
      auto report = eval::run_evaluation(rows, model, wsd::ModelId::make(inventory, features), seed, jobs);
      std::cout << report.to_text();
      if (!report_file.empty()) {
        std::ofstream out(report_file, std::ios::binary);
        out << report.to_key_values();
        if (!out) throw IoError("cannot write report " + report_file);
      }
      return 0;
    }
    if (*serve_cmd) return run_serve(config_file);
    if (*inspect_cmd) return run_inspect(model_dir, word);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
