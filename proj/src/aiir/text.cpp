#include "aiir/text.hpp"

#include <cctype>
#include <charconv>

namespace aiir {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string normalize_token(std::string_view raw) {
  const std::string_view s = trim(raw);
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (c == ' ' || c == '-' || c == '.' || c == '/' || c == '_') {
      if (!out.empty() && out.back() != '_') {
        out.push_back('_');
      }
    } else {
      out.push_back(static_cast<char>(std::toupper(c)));
    }
  }
  while (!out.empty() && out.back() == '_') {
    out.pop_back();
  }
  return out;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) {
    return std::nullopt;
  }
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    return std::nullopt;
  }
  return value;
}

} // namespace aiir
