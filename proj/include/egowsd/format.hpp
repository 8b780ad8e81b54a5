#pragma once

#include <string>
#include <string_view>

namespace egowsd {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Strict parse of a whole string; throws Error on trailing garbage.
double parse_double(std::string_view text);

}  // namespace egowsd
