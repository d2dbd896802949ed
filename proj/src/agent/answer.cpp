#include "wgym/agent/answer.hpp"

#include <optional>

namespace wgym {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<std::string> last_block(std::string_view text, std::string_view tag) {
  const std::string open = "<" + std::string(tag) + ">";
  const std::string close = "</" + std::string(tag) + ">";
  std::optional<std::string> found;
  std::size_t pos = 0;
  while (true) {
    const auto start = text.find(open, pos);
    if (start == std::string_view::npos) break;
    const auto end = text.find(close, start + open.size());
    if (end == std::string_view::npos) break;
    found = std::string(text.substr(start + open.size(), end - start - open.size()));
    pos = end + close.size();
  }
  return found;
}

}  // namespace

std::variant<ParsedAnswer, AnswerError> parse_answer(std::string_view completion) {
  auto action = last_block(completion, "action");
  if (!action) {
    return AnswerError{"Missing the <action>...</action> block in the answer."};
  }
  ParsedAnswer out;
  out.action = trim(*action);
  if (out.action.empty()) return AnswerError{"The <action> block is empty."};
  if (auto think = last_block(completion, "think")) out.think = trim(*think);
  return out;
}

}  // namespace wgym
