#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "egowsd/disambiguation.hpp"
#include "egowsd/model.hpp"

namespace egowsd::eval {

struct EvalRow {
  std::string target;
  std::string context;
  std::set<std::string> gold_hypers;
  std::set<std::string> gold_hyperhypers;  // always includes gold_hypers
  std::size_t line = 0;
};

/// TSV with a header line: target, context, comma-separated hypernyms,
/// comma-separated hypernyms of hypernyms. Labels are case-folded and the
/// direct hypernyms are added to the extended set.
std::vector<EvalRow> load_dataset(const std::filesystem::path& path);
std::vector<EvalRow> parse_dataset(std::istream& in, const std::string& source);

/// Union of hypernym labels the model could ever predict for `word`: all
/// its senses (words) or all classes containing it (super).
std::set<std::string> reachable_hypernyms(const std::string& word, wsd::InventoryKind inventory, const Model& model);

/// Rows whose gold hypernyms intersect reachable_hypernyms().
std::vector<EvalRow> filter_evaluable(const std::vector<EvalRow>& rows, wsd::InventoryKind inventory,
                                      const Model& model);

struct EvalReport {
  std::string model_id;
  std::size_t n_total = 0;
  std::size_t n_evaluated = 0;
  std::size_t n_correct_hypers = 0;
  std::size_t n_correct_hyperhypers = 0;
  std::size_t n_unknown = 0;  // counted as incorrect
  double acc_hypers = 0.0;
  double acc_hyperhypers = 0.0;

  /// `key=value` lines, fixed key order.
  std::string to_key_values() const;
  /// Human-readable aligned table.
  std::string to_text() const;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/// Scores precomputed predictions: `predicted[i]` holds the hypernym labels
/// of the sense chosen for `rows[i]`, or nullopt for an unknown word.
EvalReport score_predictions(const std::vector<EvalRow>& rows,
                             const std::vector<std::optional<hypernymy::HypernymLabels>>& predicted,
                             std::string model_id, std::size_t n_total);

/// Predicts every (already filtered) row and scores it. The random baseline
/// draws row i with a seed derived from (`seed`, i).
EvalReport evaluate(const std::vector<EvalRow>& rows, const Model& model, const wsd::ModelId& model_id,
                    std::uint64_t seed, std::optional<std::size_t> n_total = std::nullopt, std::size_t jobs = 1);

/// filter_evaluable followed by evaluate.
EvalReport run_evaluation(const std::vector<EvalRow>& rows, const Model& model, const wsd::ModelId& model_id,
                          std::uint64_t seed, std::size_t jobs = 1);

}  // namespace egowsd::eval
