#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>

namespace pdmp {

/// Shortest round-trip decimal representation of a double ('.' decimal).
inline std::string format_double(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) {
    return "nan";
  }
  return std::string(buffer, end);
}

/// Builds one RFC-4180 record. Fields containing separators or quotes are
/// quoted.
class CsvRow {
 public:
  CsvRow& add(std::string_view field) {
    separate();
    bool quote = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!quote) {
      text_.append(field);
      return *this;
    }
    text_.push_back('"');
    for (char c : field) {
      if (c == '"') {
        text_.push_back('"');
      }
      text_.push_back(c);
    }
    text_.push_back('"');
    return *this;
  }
  CsvRow& add(const char* field) { return add(std::string_view(field)); }
  CsvRow& add(const std::string& field) { return add(std::string_view(field)); }
  CsvRow& add(double value) { return add(std::string_view(format_double(value))); }
  CsvRow& add(std::uint64_t value) { return add(std::string_view(std::to_string(value))); }
  CsvRow& add(int value) { return add(std::string_view(std::to_string(value))); }

  const std::string& str() const { return text_; }

 private:
  void separate() {
    if (!first_) {
      text_.push_back(',');
    }
    first_ = false;
  }

  std::string text_;
  bool first_ = true;
};

}  // namespace pdmp
