#pragma once

#include <string>
#include <string_view>

namespace agentrag::ingest::utf8 {

// Both throw EncodingError on malformed input (overlongs, surrogates,
// truncated sequences, code points above U+10FFFF).
std::u32string decode(std::string_view bytes);
void validate(std::string_view bytes);

std::string encode(std::u32string_view text);

/// Matches Python's str.isspace() for the code points it accepts.
bool is_space(char32_t c);

}  // namespace agentrag::ingest::utf8
