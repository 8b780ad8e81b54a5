#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "egowsd/model.hpp"

namespace egowsd::store {

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kCompleteMarker = "COMPLETE";

/// Flat `key<TAB>value` contents of manifest.tsv.
using Manifest = std::map<std::string, std::string>;

/// Writes the model directory. Output is a pure function of `data`; the
/// COMPLETE marker is removed first and written last.
void save_model(const ModelData& data, const std::filesystem::path& dir);

/// Reads and validates a model directory (marker, version, row counts,
/// referential integrity, unit-norm context vectors).
ModelData load_model_data(const std::filesystem::path& dir);
Model load_model(const std::filesystem::path& dir);

/// Reads the manifest of a complete model directory.
Manifest read_manifest(const std::filesystem::path& dir);

/// Escapes `\`, TAB, LF and CR as `\\`, `\t`, `\n`, `\r`.
std::string escape_field(const std::string& text);
std::string unescape_field(const std::string& text);

}  // namespace egowsd::store
