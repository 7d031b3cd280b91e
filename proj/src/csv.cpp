#include "rbm/csv.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace rbm {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

CsvBuilder::CsvBuilder(std::string_view header) : text_(header) { text_ += '\n'; }

CsvBuilder& CsvBuilder::row(std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) text_ += ',';
    text_ += c;
    first = false;
  }
  text_ += '\n';
  return *this;
}

}  // namespace rbm
