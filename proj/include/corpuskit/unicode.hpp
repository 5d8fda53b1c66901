#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

// Small UTF-8 helpers shared across the library. All functions are total:
// malformed byte sequences pass through unchanged (each bad byte counts as
// one codepoint) so the text filters never throw on odd input.
namespace corpuskit::uni {

// Decodes the codepoint starting at byte offset `i` and advances `i` past it.
// Returns 0xFFFD for a malformed sequence (advancing one byte).
char32_t next_codepoint(std::string_view text, std::size_t& i);

void append_utf8(std::string& out, char32_t cp);

// Number of unicode scalar values (malformed bytes count as one each).
std::size_t codepoint_count(std::string_view text);

bool is_letter(char32_t cp);
bool is_upper(char32_t cp);
bool is_lower(char32_t cp);
bool is_alnum(char32_t cp);
bool is_space(char32_t cp);
char32_t to_lower(char32_t cp);

// Lowercases every codepoint (simple case mapping, no locale).
std::string lowercase(std::string_view text);

// Canonical composition (NFC). Malformed sequences are preserved as-is.
std::string nfc(std::string_view text);

bool is_valid_utf8(std::string_view text);

}  // namespace corpuskit::uni
