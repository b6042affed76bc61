#pragma once

// Number rendering and parsing shared by configuration and output files.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nnlif {

/// 17 significant digits, so that parse_number returns the same double.
/// NaN renders as "nan", infinities as "inf" and "-inf".
std::string format_number(double x);

/// Whole-string parse; surrounding blanks are ignored. nullopt on any trailing text.
std::optional<double> parse_number(std::string_view text);
std::optional<long long> parse_integer(std::string_view text);

/// Comma-separated numbers; an empty string gives an empty list.
std::optional<std::vector<double>> parse_number_list(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace nnlif
