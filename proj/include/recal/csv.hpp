#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace recal::csv {

// Shortest decimal that round-trips to the same double.
std::string format_real(double v);

// Whole-field parse; surrounding blanks allowed, nothing else.
std::optional<double> parse_real(std::string_view field);

// Splits on ','. No quoting: every field this project reads or writes is numeric
// or a bare identifier.
std::vector<std::string_view> split(std::string_view line);

// Removes a trailing '\r' left by CRLF files.
std::string_view chomp(std::string_view line);

} // namespace recal::csv
