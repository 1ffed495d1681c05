#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lanczos::csv {

/// Locale-independent, 17 significant digits; parse_double(format_double(x)) == x.
std::string format_double(double value);

/// Whole-string parse; throws Error{InvalidArgument} on trailing junk.
double parse_double(std::string_view text);

std::vector<std::string> split(std::string_view line, char delimiter = ',');

std::string_view trim(std::string_view text);

}  // namespace lanczos::csv
