#pragma once

#include <string>
#include <string_view>

namespace talkprofiler {

// Shortest decimal representation that parses back to the same double
// (std::to_chars). Report files written with this round-trip bit-exactly.
std::string format_double(double value);

// RFC 4180 quoting, applied only when the field needs it.
std::string csv_field(std::string_view field);

}  // namespace talkprofiler
