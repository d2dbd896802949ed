#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace wgym {

enum class ChatRole { user, assistant, infeasible, user_feedback };

std::string_view to_string(ChatRole role);
ChatRole chat_role_from_string(std::string_view name);

// One part of a chat message. Image parts carry an opaque identifier that the
// trace store resolves; nothing in this project decodes pixels.
struct ContentPart {
  enum class Kind { text, image };
  Kind kind = Kind::text;
  std::string value;

  static ContentPart text(std::string s) { return {Kind::text, std::move(s)}; }
  static ContentPart image(std::string ref) { return {Kind::image, std::move(ref)}; }

  bool operator==(const ContentPart&) const = default;
};

struct ChatMessage {
  ChatRole role = ChatRole::user;
  std::vector<ContentPart> parts;

  // Throws std::invalid_argument when the invariants do not hold: parts must
  // be non-empty and infeasible messages carry exactly one text part.
  static ChatMessage make(ChatRole role, std::vector<ContentPart> parts);
  static ChatMessage text(ChatRole role, std::string text);

  // Concatenation of the text parts, separated by newlines.
  std::string text() const;

  bool operator==(const ChatMessage&) const = default;
};

using Goal = std::vector<ContentPart>;

std::string goal_text(const Goal& goal);

void to_json(nlohmann::json& j, const ContentPart& part);
void from_json(const nlohmann::json& j, ContentPart& part);
void to_json(nlohmann::json& j, const ChatMessage& msg);
void from_json(const nlohmann::json& j, ChatMessage& msg);

}  // namespace wgym
