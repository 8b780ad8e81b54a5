#pragma once

#include <string>
#include <vector>

namespace egowsd {

struct WeightedWord {
  std::string word;
  double weight = 0.0;

  friend bool operator==(const WeightedWord&, const WeightedWord&) = default;
};

using WeightedWords = std::vector<WeightedWord>;

}  // namespace egowsd
