#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lpgm {

/// Shortest round-trip-safe representation: 17 significant digits.
std::string format_double(double v);

/// Parses a numeric CSV table; blank lines and a non-numeric header row are skipped.
std::vector<std::vector<double>> parse_numeric_csv(std::string_view text);

}  // namespace lpgm
