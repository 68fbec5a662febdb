#pragma once
#include <pstream/errors.hpp>

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

namespace pstream::detail {

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

template <typename T> T parse_number(std::string_view field, std::size_t offset) {
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ParseError("malformed number '" + std::string(field) + "'", offset);
  return value;
}

} // namespace pstream::detail
