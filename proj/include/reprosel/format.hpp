#pragma once

#include <string>
#include <string_view>

namespace reprosel {

/// Shortest-safe text form of a double: 17 significant digits, which
/// round-trips every finite value exactly.
std::string format_double(double value);

/// Quotes a CSV field when it contains a separator, quote or line break.
std::string csv_escape(std::string_view field);

}  // namespace reprosel
