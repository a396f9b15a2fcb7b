#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace clr {

// Word-level tokenizer: ASCII-lowercases, splits on Unicode whitespace, and
// breaks ASCII punctuation characters out into standalone tokens. Total
// function; malformed UTF-8 bytes are carried through as word characters.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace clr
