#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "egowsd/corpus.hpp"
#include "egowsd/model.hpp"

namespace egowsd {

struct StageReport {
  std::string stage;
  double seconds = 0.0;
  std::string summary;  // counts produced by the stage
};

using StageCallback = std::function<void(const StageReport&)>;

/// Runs every induction stage on an already tokenized corpus. A failing
/// stage is rethrown as Error prefixed with the stage name.
ModelData build_model(std::span<const corpus::Sentence> sentences, const PipelineConfig& config,
                      std::size_t jobs = 1, const StageCallback& on_stage = {});

/// Reads the corpus at `corpus_path`, builds and saves to `out_dir`.
ModelData build(const std::filesystem::path& corpus_path, const std::filesystem::path& out_dir,
                const PipelineConfig& config, std::size_t jobs = 1, const StageCallback& on_stage = {});

}  // namespace egowsd
