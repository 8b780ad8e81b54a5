#include "egowsd/evaluation.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "egowsd/errors.hpp"
#include "egowsd/format.hpp"
#include "egowsd/parallel.hpp"
#include "egowsd/random.hpp"

namespace egowsd::eval {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  for (;;) {
    auto end = s.find(sep, begin);
    out.push_back(s.substr(begin, end == std::string::npos ? std::string::npos : end - begin));
    if (end == std::string::npos) return out;
    begin = end + 1;
  }
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::set<std::string> parse_labels(const std::string& field) {
  std::set<std::string> out;
  for (const auto& part : split(field, ',')) {
    auto t = trim(part);
    if (!t.empty()) out.insert(corpus::fold_case(t));
  }
  return out;
}

}  // namespace

std::vector<EvalRow> parse_dataset(std::istream& in, const std::string& source) {
  std::vector<EvalRow> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 4) {
      throw ParseError(source, line_no, "expected 4 tab-separated columns, found " + std::to_string(fields.size()));
    }
    EvalRow row;
    row.target = corpus::fold_case(trim(fields[0]));
    row.context = fields[1];
    row.gold_hypers = parse_labels(fields[2]);
    row.gold_hyperhypers = parse_labels(fields[3]);
    row.line = line_no;
    if (row.target.empty()) throw ParseError(source, line_no, "empty target");
    if (row.gold_hypers.empty()) throw ParseError(source, line_no, "empty gold hypernym set");
    row.gold_hyperhypers.insert(row.gold_hypers.begin(), row.gold_hypers.end());
    rows.push_back(std::move(row));
  }
  if (header) throw ParseError(source, 0, "missing header line");
  return rows;
}

std::vector<EvalRow> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read dataset " + path.string());
  return parse_dataset(in, path.string());
}

std::set<std::string> reachable_hypernyms(const std::string& word, wsd::InventoryKind inventory, const Model& model) {
  std::set<std::string> out;
  if (inventory == wsd::InventoryKind::words) {
    if (const auto* entries = model.find_senses(word)) {
      for (const auto& e : *entries) {
        for (const auto& h : e.hypernyms) out.insert(h.word);
      }
    }
  } else {
    for (std::size_t id : model.classes_of(word)) {
      for (const auto& h : model.class_by_id(id).hypernyms) out.insert(h.word);
    }
  }
  return out;
}

std::vector<EvalRow> filter_evaluable(const std::vector<EvalRow>& rows, wsd::InventoryKind inventory,
                                      const Model& model) {
  std::vector<EvalRow> out;
  for (const auto& row : rows) {
    auto reachable = reachable_hypernyms(row.target, inventory, model);
    for (const auto& g : row.gold_hypers) {
      if (reachable.count(g)) {
        out.push_back(row);
        break;
      }
    }
  }
  return out;
}

std::string EvalReport::to_key_values() const {
  std::ostringstream out;
  out << "model_id=" << model_id << "\n"
      << "n_total=" << n_total << "\n"
      << "n_evaluated=" << n_evaluated << "\n"
      << "n_correct_hypers=" << n_correct_hypers << "\n"
      << "n_correct_hyperhypers=" << n_correct_hyperhypers << "\n"
      << "n_unknown=" << n_unknown << "\n"
      << "acc_hypers=" << format_double(acc_hypers) << "\n"
      << "acc_hyperhypers=" << format_double(acc_hyperhypers) << "\n";
  return out.str();
}

std::string EvalReport::to_text() const {
  std::ostringstream out;
  auto row = [&](const std::string& key, const std::string& value) {
    out << std::left << std::setw(24) << key << value << "\n";
  };
  auto ratio = [](double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(4) << v;
    return s.str();
  };
  row("model", model_id);
  row("rows total", std::to_string(n_total));
  row("rows evaluated", std::to_string(n_evaluated));
  row("unknown words", std::to_string(n_unknown));
  row("correct (Hypers)", std::to_string(n_correct_hypers));
  row("correct (HyperHypers)", std::to_string(n_correct_hyperhypers));
  row("accuracy (Hypers)", ratio(acc_hypers));
  row("accuracy (HyperHypers)", ratio(acc_hyperhypers));
  return out.str();
}

EvalReport score_predictions(const std::vector<EvalRow>& rows,
                             const std::vector<std::optional<hypernymy::HypernymLabels>>& predicted,
                             std::string model_id, std::size_t n_total) {
  if (rows.size() != predicted.size()) throw Error("score_predictions: row/prediction count mismatch");
  EvalReport report;
  report.model_id = std::move(model_id);
  report.n_total = n_total;
  report.n_evaluated = rows.size();
  auto hits = [](const hypernymy::HypernymLabels& labels, const std::set<std::string>& gold) {
    for (const auto& l : labels) {
      if (gold.count(l.word)) return true;
    }
    return false;
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!predicted[i]) {
      ++report.n_unknown;
      continue;
    }
    if (hits(*predicted[i], rows[i].gold_hypers)) ++report.n_correct_hypers;
    if (hits(*predicted[i], rows[i].gold_hyperhypers)) ++report.n_correct_hyperhypers;
  }
  if (report.n_evaluated > 0) {
    report.acc_hypers = static_cast<double>(report.n_correct_hypers) / static_cast<double>(report.n_evaluated);
    report.acc_hyperhypers =
        static_cast<double>(report.n_correct_hyperhypers) / static_cast<double>(report.n_evaluated);
  }
  return report;
}

EvalReport evaluate(const std::vector<EvalRow>& rows, const Model& model, const wsd::ModelId& model_id,
                    std::uint64_t seed, std::optional<std::size_t> n_total, std::size_t jobs) {
  std::vector<std::optional<hypernymy::HypernymLabels>> predicted(rows.size());
  parallel_for(rows.size(), jobs, [&](std::size_t i) {
    try {
      auto p = wsd::disambiguate(rows[i].target, rows[i].context, model_id, model, splitmix64(seed ^ i));
      predicted[i] = wsd::candidate_hypernyms(model, p.best().sense);
    } catch (const UnknownWordError&) {
      predicted[i] = std::nullopt;
    }
  });
  return score_predictions(rows, predicted, model_id.str(), n_total.value_or(rows.size()));
}

EvalReport run_evaluation(const std::vector<EvalRow>& rows, const Model& model, const wsd::ModelId& model_id,
                          std::uint64_t seed, std::size_t jobs) {
  auto kept = filter_evaluable(rows, model_id.inventory, model);
  return evaluate(kept, model, model_id, seed, rows.size(), jobs);
}

}  // namespace egowsd::eval
