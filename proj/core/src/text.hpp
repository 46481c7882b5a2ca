#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Locale-independent number formatting and parsing shared by the writers
// and parsers.
namespace lmscreen::text {

/// %.9g, always with '.' as the decimal separator.
std::string format_sig9(double value);

/// Fixed-point with `decimals` digits, used for SVG coordinates.
std::string format_fixed(double value, int decimals);

/// Round to the value `format_sig9` would print.
double round_sig9(double value);

/// Strict whole-token float parse: no leading '+', no surrounding spaces,
/// finite results only.
std::optional<double> parse_double(std::string_view token);

std::vector<std::string_view> split(std::string_view line, char sep);

/// Splits into lines, dropping a trailing '\r' from each.
std::vector<std::string_view> lines(std::string_view text);

std::string_view trim(std::string_view s);

/// Text-safe escaping for XML attribute and element content.
std::string xml_escape(std::string_view s);

}  // namespace lmscreen::text
