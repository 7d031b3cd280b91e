#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

namespace rbm {

/// 17 significant digits, '.' separator, locale independent.
std::string format_double(double v);

/// Comma-joined row terminated by '\n'.
class CsvBuilder {
 public:
  explicit CsvBuilder(std::string_view header);
  CsvBuilder& row(std::initializer_list<std::string> cells);
  const std::string& str() const { return text_; }

 private:
  std::string text_;
};

}  // namespace rbm
