#pragma once

// Angles and sweep lists given as rational multiples of pi: "pi/4",
// "3pi/8", "-pi", "0.3", lists "0,pi/8,pi/4" and ranges "0:pi/20:pi/2"
// (start:step:stop, stop included).

#include <cstddef>
#include <string_view>
#include <vector>

namespace qwh::cli {

/// Throws std::invalid_argument on malformed text.
double parse_angle(std::string_view text);
std::vector<double> parse_angle_list(std::string_view text);

/// Non-negative integers: "2,10,20" or "10:10:100".
std::vector<std::size_t> parse_count_list(std::string_view text);

/// n + 1 evenly spaced points from lo to hi, both ends exact.
std::vector<double> linspace(double lo, double hi, std::size_t intervals);

}  // namespace qwh::cli
