#include "egowsd/format.hpp"

#include <charconv>
#include <cmath>

#include "egowsd/errors.hpp"

namespace egowsd {

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw Error("cannot format double");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(out)) {
    throw Error("invalid number '" + std::string(text) + "'");
  }
  return out;
}

}  // namespace egowsd
