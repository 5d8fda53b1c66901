#include "corpuskit/unicode.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "corpuskit/error.hpp"

namespace corpuskit::uni {

char32_t next_codepoint(std::string_view text, std::size_t& i) {
    const auto* s = reinterpret_cast<const std::uint8_t*>(text.data());
    std::int32_t offset = static_cast<std::int32_t>(i);
    std::int32_t length = static_cast<std::int32_t>(text.size());
    UChar32 cp;
    U8_NEXT(s, offset, length, cp);
    i = static_cast<std::size_t>(offset);
    return cp < 0 ? 0xFFFD : static_cast<char32_t>(cp);
}

void append_utf8(std::string& out, char32_t cp) {
    std::uint8_t buf[4];
    std::int32_t n = 0;
    UBool err = false;
    U8_APPEND(buf, n, 4, static_cast<UChar32>(cp), err);
    if (err) {
        // Unencodable scalar (surrogate or > 0x10FFFF): emit the replacement char.
        out += "\xEF\xBF\xBD";
        return;
    }
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
}

std::size_t codepoint_count(std::string_view text) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < text.size();) {
        std::size_t before = i;
        next_codepoint(text, i);
        if (i <= before) i = before + 1;  // safety against stalls
        ++n;
    }
    return n;
}

bool is_letter(char32_t cp) { return u_isalpha(static_cast<UChar32>(cp)); }
bool is_upper(char32_t cp) { return u_isupper(static_cast<UChar32>(cp)); }
bool is_lower(char32_t cp) { return u_islower(static_cast<UChar32>(cp)); }
bool is_alnum(char32_t cp) { return u_isalnum(static_cast<UChar32>(cp)); }
bool is_space(char32_t cp) { return u_isUWhiteSpace(static_cast<UChar32>(cp)); }
char32_t to_lower(char32_t cp) {
    return static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp)));
}

std::string lowercase(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        std::size_t before = i;
        char32_t cp = next_codepoint(text, i);
        if (cp == 0xFFFD && i == before + 1 &&
            static_cast<unsigned char>(text[before]) >= 0x80) {
            out += text[before];  // keep malformed byte untouched
            continue;
        }
        append_utf8(out, to_lower(cp));
    }
    return out;
}

std::string nfc(std::string_view text) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) throw DataError("unicode normalizer unavailable");
    if (!is_valid_utf8(text)) return std::string(text);  // keep malformed input as-is
    std::string out;
    icu::StringByteSink<std::string> sink(&out);
    norm->normalizeUTF8(0, icu::StringPiece(text.data(), static_cast<std::int32_t>(text.size())),
                        sink, nullptr, status);
    if (U_FAILURE(status)) throw DataError("unicode normalization failed");
    return out;
}

bool is_valid_utf8(std::string_view text) {
    const auto* s = reinterpret_cast<const std::uint8_t*>(text.data());
    std::int32_t offset = 0;
    std::int32_t length = static_cast<std::int32_t>(text.size());
    while (offset < length) {
        UChar32 cp;
        U8_NEXT(s, offset, length, cp);
        if (cp < 0) return false;
    }
    return true;
}

}  // namespace corpuskit::uni
