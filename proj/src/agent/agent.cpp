#include "wgym/agent/agent.hpp"

namespace wgym {

ProcessedObs Agent::obs_preprocessor(const Observation& obs) { return nlohmann::json(obs); }

void to_json(nlohmann::json& j, const AgentInfo& info) {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : info.chat_messages) {
    msgs.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  }
  j = nlohmann::json{{"think", info.think},
                     {"chat_messages", msgs},
                     {"stats", info.stats},
                     {"tokens", info.tokens},
                     {"extra", info.extra}};
}

void from_json(const nlohmann::json& j, AgentInfo& info) {
  info.think = j.value("think", "");
  info.chat_messages.clear();
  for (const auto& m : j.value("chat_messages", nlohmann::json::array())) {
    info.chat_messages.push_back(
        {llm_role_from_string(m.at("role").get<std::string>()), m.at("content").get<std::string>()});
  }
  info.stats = j.value("stats", std::map<std::string, double>{});
  if (j.contains("tokens")) info.tokens = j.at("tokens").get<Usage>();
  info.extra = j.value("extra", std::map<std::string, std::string>{});
}

}  // namespace wgym
