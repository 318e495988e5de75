#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace agec::uni {

// Decodes UTF-8 into code points. Throws parse_error on malformed bytes;
// `line` is only used for the error message.
std::vector<char32_t> decode(const std::string& utf8, std::size_t line = 0);

std::string encode(const std::vector<char32_t>& cps);
std::string encode_one(char32_t cp);

// Canonical composition (NFC). Backed by ICU.
std::string nfc(const std::string& utf8, std::size_t line = 0);

bool is_whitespace(char32_t cp);

// Unicode general categories P* (Pc Pd Ps Pe Pi Pf Po).
bool is_punctuation(char32_t cp);

}  // namespace agec::uni
