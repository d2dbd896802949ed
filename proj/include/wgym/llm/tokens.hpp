#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace wgym {

using TokenCounter = std::function<std::size_t(std::string_view)>;

// Whitespace-delimited words, with every ASCII punctuation character split
// off as its own token: "click('a1')" is click ( ' a1 ' ), 6 tokens.
std::size_t count_tokens(std::string_view text);
std::vector<std::string_view> tokenize(std::string_view text);

TokenCounter default_token_counter();

}  // namespace wgym
