#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace pantilt::text {

// printf "%.6g".
std::string g6(double value);

// Shortest representation that round-trips, always with a decimal point or
// exponent ("0.0", "-15.0", "22.5"). Negative zero prints as "0.0".
std::string shortest(double value);

std::string_view trim(std::string_view s);

// Whole-string parses; whitespace is not skipped.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace pantilt::text
