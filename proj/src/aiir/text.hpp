#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace aiir {

// Canonical token form used for enum values and column names: trimmed,
// uppercased, with runs of space / '-' / '.' / '/' / '_' collapsed to a
// single underscore. "SENTIMENT ANALYSIS-BASED TRADING" and
// "SENTIMENT_ANALYSIS-BASED_TRADING" normalize to the same token.
std::string normalize_token(std::string_view raw);

// Shortest decimal form that round-trips the double exactly ("12.8", "100").
std::string format_double(double value);

// Strict parse of a full string as a decimal number; nullopt on empty input,
// trailing characters, or out-of-range values.
std::optional<double> parse_double(std::string_view text);

std::string_view trim(std::string_view s);

} // namespace aiir
