#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sgder {

/// Shortest decimal string that round-trips the exact double value.
std::string format_double(double value);

double parse_double(std::string_view text);
long parse_long(std::string_view text);

std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace sgder
