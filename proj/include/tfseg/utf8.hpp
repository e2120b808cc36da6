#pragma once

#include <string>
#include <string_view>

namespace tfseg {

// Decodes strict UTF-8 (no overlongs, surrogates, or values past U+10FFFF).
// Throws input_error naming the byte offset of the first invalid sequence.
std::u32string decode_utf8(std::string_view bytes);

std::string encode_utf8(std::u32string_view text);

}  // namespace tfseg
