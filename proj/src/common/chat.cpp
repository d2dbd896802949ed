#include "wgym/common/chat.hpp"

#include <stdexcept>

namespace wgym {

std::string_view to_string(ChatRole role) {
  switch (role) {
    case ChatRole::user:
      return "user";
    case ChatRole::assistant:
      return "assistant";
    case ChatRole::infeasible:
      return "infeasible";
    case ChatRole::user_feedback:
      return "user_feedback";
  }
  return "user";
}

ChatRole chat_role_from_string(std::string_view name) {
  if (name == "user") return ChatRole::user;
  if (name == "assistant") return ChatRole::assistant;
  if (name == "infeasible") return ChatRole::infeasible;
  if (name == "user_feedback") return ChatRole::user_feedback;
  throw std::invalid_argument("unknown chat role '" + std::string(name) + "'");
}

ChatMessage ChatMessage::make(ChatRole role, std::vector<ContentPart> parts) {
  if (parts.empty()) throw std::invalid_argument("chat message must have at least one part");
  if (role == ChatRole::infeasible &&
      (parts.size() != 1 || parts.front().kind != ContentPart::Kind::text)) {
    throw std::invalid_argument("infeasible messages carry exactly one text part");
  }
  return ChatMessage{role, std::move(parts)};
}

ChatMessage ChatMessage::text(ChatRole role, std::string text) {
  return make(role, {ContentPart::text(std::move(text))});
}

std::string ChatMessage::text() const {
  std::string out;
  for (const auto& part : parts) {
    if (part.kind != ContentPart::Kind::text) continue;
    if (!out.empty()) out += '\n';
    out += part.value;
  }
  return out;
}

std::string goal_text(const Goal& goal) {
  std::string out;
  for (const auto& part : goal) {
    if (part.kind != ContentPart::Kind::text) continue;
    if (!out.empty()) out += '\n';
    out += part.value;
  }
  return out;
}

void to_json(nlohmann::json& j, const ContentPart& part) {
  j = nlohmann::json{{"type", part.kind == ContentPart::Kind::text ? "text" : "image"},
                     {"value", part.value}};
}

void from_json(const nlohmann::json& j, ContentPart& part) {
  const auto type = j.at("type").get<std::string>();
  if (type == "text") {
    part.kind = ContentPart::Kind::text;
  } else if (type == "image") {
    part.kind = ContentPart::Kind::image;
  } else {
    throw std::invalid_argument("unknown content part type '" + type + "'");
  }
  part.value = j.at("value").get<std::string>();
}

void to_json(nlohmann::json& j, const ChatMessage& msg) {
  j = nlohmann::json{{"role", to_string(msg.role)}, {"parts", msg.parts}};
}

void from_json(const nlohmann::json& j, ChatMessage& msg) {
  msg.role = chat_role_from_string(j.at("role").get<std::string>());
  msg.parts = j.at("parts").get<std::vector<ContentPart>>();
}

}  // namespace wgym
