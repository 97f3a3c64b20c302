#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace cslab {

// Shortest decimal that round-trips, '.' separator, independent of locale.
// Non-finite values print as nan, inf and -inf.
std::string format_double(double v);
// Fixed notation with the given number of decimals.
std::string format_fixed(double v, int decimals);
std::string format_uint(std::uint64_t v);

void write_text_file(const std::string& path, std::string_view text);
std::string read_text_file(const std::string& path);

}  // namespace cslab
