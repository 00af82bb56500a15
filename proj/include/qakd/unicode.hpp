#ifndef QAKD_UNICODE_HPP
#define QAKD_UNICODE_HPP

#include <string>
#include <string_view>

namespace qakd::unicode {

/// Decodes UTF-8; ill-formed sequences become U+FFFD.
std::u32string decode_utf8(std::string_view text);

std::string encode_utf8(std::u32string_view text);

/// Full Unicode lower-case mapping (root locale).
std::u32string to_lower(std::u32string_view text);

/// ASCII punctuation (!"#$%&'()*+,-./:;<=>?@[\]^_`{|}~) or general category P*.
bool is_punctuation(char32_t c);

/// Letter, number or underscore: the characters a regex \w matches.
bool is_word_char(char32_t c);

bool is_space(char32_t c);

/// Compatibility decomposition (NFKD), then every non-ASCII code point dropped.
std::string fold_to_ascii(std::string_view utf8);

}  // namespace qakd::unicode

#endif  // QAKD_UNICODE_HPP
