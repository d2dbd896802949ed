#pragma once

#include <string>
#include <string_view>
#include <variant>

namespace wgym {

struct ParsedAnswer {
  std::string think;
  std::string action;
  bool operator==(const ParsedAnswer&) const = default;
};

struct AnswerError {
  std::string message;
};

// The last <think>...</think> and the last <action>...</action> block. The
// action is trimmed; a missing or empty action block is an error.
std::variant<ParsedAnswer, AnswerError> parse_answer(std::string_view completion);

}  // namespace wgym
