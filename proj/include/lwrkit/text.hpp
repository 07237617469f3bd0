#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lwr {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Strict parse: the whole string must be a finite or infinite double.
std::optional<double> parse_double(std::string_view text);

/// Joins already formatted fields with commas, quoting any field that needs it.
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace lwr
