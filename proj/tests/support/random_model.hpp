#pragma once

#include <cstdint>

#include "egowsd/model.hpp"

namespace egowsd::testing {

/// A structurally valid model with random contents: random words (some
/// non-ASCII), weights spanning many magnitudes, examples containing tabs,
/// newlines and backslashes, and classes over random sense subsets.
ModelData make_random_model(std::uint64_t seed);

}  // namespace egowsd::testing
