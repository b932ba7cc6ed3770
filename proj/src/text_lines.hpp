#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "learnspace/core.hpp"

namespace learnspace::detail {

// Yields trimmed lines, skipping blanks and `#` comments, tracking line numbers.
struct LineReader {
  std::istringstream in;
  std::size_t line_no = 0;

  explicit LineReader(std::string_view text) : in{std::string(text)} {}

  std::optional<std::string> next() {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      auto t = trim(line);
      if (t.empty() || t.front() == '#') continue;
      return std::string(t);
    }
    return std::nullopt;
  }
};

}  // namespace learnspace::detail
