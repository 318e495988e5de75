#include "agec/unicode.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "agec/errors.hpp"

namespace agec::uni {

std::vector<char32_t> decode(const std::string& utf8, std::size_t line) {
    std::vector<char32_t> out;
    out.reserve(utf8.size());
    const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
    int32_t i = 0;
    const auto n = static_cast<int32_t>(utf8.size());
    while (i < n) {
        UChar32 cp;
        U8_NEXT(s, i, n, cp);
        if (cp < 0) throw parse_error("invalid UTF-8 byte sequence", line);
        out.push_back(static_cast<char32_t>(cp));
    }
    return out;
}

std::string encode_one(char32_t cp) {
    std::string out;
    uint8_t buf[U8_MAX_LENGTH];
    int32_t len = 0;
    UBool err = false;
    U8_APPEND(buf, len, U8_MAX_LENGTH, static_cast<UChar32>(cp), err);
    if (err) throw contract_error("code point not encodable as UTF-8");
    out.assign(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(len));
    return out;
}

std::string encode(const std::vector<char32_t>& cps) {
    std::string out;
    out.reserve(cps.size() * 2);
    for (char32_t cp : cps) out += encode_one(cp);
    return out;
}

std::string nfc(const std::string& utf8, std::size_t line) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) throw contract_error("ICU NFC instance unavailable");

    icu::UnicodeString u = icu::UnicodeString::fromUTF8(utf8);
    if (u.isBogus()) throw parse_error("invalid UTF-8 byte sequence", line);

    icu::UnicodeString composed = norm->normalize(u, status);
    if (U_FAILURE(status)) throw parse_error("Unicode normalization failed", line);

    std::string out;
    composed.toUTF8String(out);
    return out;
}

bool is_whitespace(char32_t cp) {
    return u_isUWhiteSpace(static_cast<UChar32>(cp)) != 0;
}

bool is_punctuation(char32_t cp) {
    return u_ispunct(static_cast<UChar32>(cp)) != 0;
}

}  // namespace agec::uni
