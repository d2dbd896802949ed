#include "wgym/llm/tokens.hpp"

#include <cctype>

namespace wgym {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_punct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u) != 0;
}

}  // namespace

std::vector<std::string_view> tokenize(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_space(text[i])) {
      ++i;
    } else if (is_punct(text[i])) {
      out.push_back(text.substr(i, 1));
      ++i;
    } else {
      std::size_t j = i;
      while (j < text.size() && !is_space(text[j]) && !is_punct(text[j])) ++j;
      out.push_back(text.substr(i, j - i));
      i = j;
    }
  }
  return out;
}

std::size_t count_tokens(std::string_view text) {
  std::size_t n = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    ++n;
    if (is_punct(text[i])) {
      ++i;
      continue;
    }
    while (i < text.size() && !is_space(text[i]) && !is_punct(text[i])) ++i;
  }
  return n;
}

TokenCounter default_token_counter() {
  return [](std::string_view s) { return count_tokens(s); };
}

}  // namespace wgym
