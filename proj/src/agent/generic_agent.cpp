#include "wgym/agent/generic_agent.hpp"

#include <chrono>
#include <sstream>

#include <fmt/format.h>

#include "wgym/actions/describe.hpp"
#include "wgym/agent/answer.hpp"
#include "wgym/common/errors.hpp"
#include "wgym/observation/flatten.hpp"

namespace wgym {

namespace {

const std::string kInstructions =
    "# Instructions\n"
    "Review the current state of the page and all other information to find the best\n"
    "possible next action to accomplish your goal. Your answer will be interpreted\n"
    "and executed by a program, make sure to follow the formatting instructions.\n";

const std::string kAxtreeNotes =
    "Note: [bid] is the unique alpha-numeric identifier at the beginning of lines for each "
    "element in the AXTree. Always use bid to refer to elements in your actions.\n"
    "\n"
    "Note: You can only interact with visible elements. If the \"visible\" tag is not\n"
    "present, the element is not visible on the page.\n";

const std::string kActionSpaceNote =
    "Note: This action set allows you to interact with your environment. Most of them\n"
    "are python function executing playwright code. The primary way of referring to\n"
    "elements in the page is through bid which are specified in your observations.\n";

const std::string kActionTips =
    "Note:\n"
    "* Some tasks may be game like and may require to interact with the mouse position\n"
    "in x, y coordinates.\n"
    "* Some text field might have auto completion. To see it, you have to type a few\n"
    "characters and wait until next step.\n"
    "* If you have to cut and paste, don't forget to select the text first.\n"
    "* Coordinate inside an SVG are relative to it's top left corner.\n"
    "* Make sure to use bid to identify elements when using commands.\n"
    "* Interacting with combobox, dropdowns and auto-complete fields can be tricky,\n"
    "sometimes you need to use select_option, while other times you need to use fill\n"
    "or click and wait for the reaction of the page.\n";

const std::string kAbstractExample =
    "# Abstract Example\n"
    "\n"
    "Here is an abstract version of the answer with description of the content of\n"
    "each tag. Make sure you follow this structure, but replace the content with your\n"
    "answer:\n";

const std::string kAbstractThink =
    "<think>\n"
    "Think step by step. If you need to make calculations such as coordinates, write them here. "
    "Describe the effect\n"
    "that your previous action had on the current content of the page.\n"
    "</think>\n";

const std::string kAbstractAction =
    "<action>\n"
    "One single action to be executed. You can only use one action at a time.\n"
    "</action>\n";

const std::string kConcreteExample =
    "# Concrete Example\n"
    "\n"
    "Here is a concrete example of how to format your answer.\n"
    "Make sure to follow the template with proper tags:\n";

const std::string kConcreteThink =
    "<think>\n"
    "From previous action I tried to set the value of year to \"2022\",\n"
    "using select_option, but it doesn't appear to be in the form. It may be a\n"
    "dynamic dropdown, I will try using click with the bid \"a324\" and look at the\n"
    "response from the page.\n"
    "</think>\n";

const std::string kConcreteAction =
    "<action>\n"
    "click('a324')\n"
    "</action>\n";

std::string indent_lines(const std::string& text, const std::string& prefix) {
  std::string out;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!first) out += '\n';
    out += prefix + line;
    first = false;
  }
  return out;
}

std::string render_history_step(const GenericFlags& flags, std::size_t k, const HistoryStep& h) {
  std::string out = fmt::format("## step {}\n", k);
  if (flags.obs.use_think_history && !h.think.empty()) {
    out += fmt::format("\n<think>\n{}\n</think>\n", h.think);
  }
  if (flags.obs.use_action_history) out += fmt::format("\n<action>\n{}\n</action>\n", h.action);
  if (flags.obs.use_past_error_logs && !h.error.empty()) {
    out += fmt::format("\nError from this action:\n{}\n", h.error);
  }
  return out;
}

std::string str_or_empty(const ProcessedObs& obs, const char* key) {
  auto it = obs.find(key);
  if (it == obs.end() || !it->is_string()) return {};
  return it->get<std::string>();
}

}  // namespace

ActionSetConfig ActionFlags::action_set_config() const {
  ActionSetConfig c;
  c.enabled_categories = action_categories;
  c.multi_action = multi_actions;
  c.long_description = long_description;
  c.individual_examples = individual_examples;
  return c;
}

void GenericFlags::validate() const {
  if (obs.use_som && !obs.use_screenshot) throw ConfigError("use_som requires use_screenshot");
  if (obs.use_screenshot) {
    throw ConfigError("use_screenshot is not supported: the page backend has no rasterizer");
  }
  if (obs.filter_som_only) throw ConfigError("filter_som_only requires set-of-marks support");
  if (action.multi_actions) throw ConfigError("multi_actions is not supported");
  if (use_plan) throw ConfigError("use_plan is not supported");
  if (use_criticize) throw ConfigError("use_criticize is not supported");
  if (!obs.use_axtree && !obs.use_html) {
    throw ConfigError("at least one of use_axtree and use_html must be set");
  }
  if (action.action_categories.empty()) throw ConfigError("action_categories must not be empty");
  if (max_prompt_tokens == 0) throw ConfigError("max_prompt_tokens must be > 0");
}

void GenericFlags::set_benchmark(const std::string& benchmark_name) {
  if (benchmark_name.find("miniwob") != std::string::npos) obs.use_html = true;
}

ProcessedObs generic_preprocess(const ObsFlags& flags, const Observation& obs) {
  ProcessedObs out = nlohmann::json::object();
  std::string goal;
  nlohmann::json images = nlohmann::json::array();
  for (const auto& part : obs.goal_object) {
    if (part.kind == ContentPart::Kind::text) {
      if (!goal.empty()) goal += '\n';
      goal += part.value;
    } else {
      images.push_back(part.value);
    }
  }
  out["goal"] = goal;
  out["goal_images"] = images;
  nlohmann::json chat = nlohmann::json::array();
  for (const auto& m : obs.chat_messages) {
    chat.push_back({{"role", to_string(m.role)}, {"text", m.text()}});
  }
  out["chat"] = chat;
  nlohmann::json tabs = nlohmann::json::array();
  for (std::size_t i = 0; i < obs.open_pages_urls.size(); ++i) {
    const std::string title = i < obs.open_pages_titles.size() ? obs.open_pages_titles[i] : "";
    tabs.push_back({{"title", title}, {"url", obs.open_pages_urls[i]}});
  }
  out["tabs"] = tabs;
  out["active_tab"] = obs.active_page_index;
  if (flags.use_axtree) {
    AXFlattenOptions o;
    o.filter_visible_only = flags.filter_visible_elements_only;
    o.filter_with_bid_only = flags.filter_with_bid_only;
    o.filter_som_only = flags.filter_som_only;
    o.show_clickable = flags.extract_clickable_tag;
    o.show_visible = flags.extract_visible_tag;
    o.show_coords = flags.extract_coords;
    out["axtree_txt"] = flatten_axtree(obs.axtree, o);
  }
  if (flags.use_html) {
    HtmlFlattenOptions o;
    o.props = &obs.extra_element_properties;
    o.filter_visible_only = flags.filter_visible_elements_only;
    o.filter_with_bid_only = flags.filter_with_bid_only;
    out["html_txt"] = flatten_html(obs.dom, o);
  }
  out["focused_element_bid"] =
      obs.focused_element_bid ? nlohmann::json(*obs.focused_element_bid) : nlohmann::json();
  out["last_action_error"] = obs.last_action_error;
  return out;
}

const std::string& generic_system_message() {
  static const std::string msg =
      "You operate a web browser on behalf of a user. At every step you see the goal, the "
      "current page and your previous steps, and you answer with one action that a program "
      "executes in the browser before showing you the next state.";
  return msg;
}

std::vector<PromptComponent> build_generic_prompt(const GenericFlags& flags,
                                                  const ProcessedObs& obs,
                                                  const std::vector<HistoryStep>& history) {
  std::vector<PromptComponent> out;

  std::string instructions = kInstructions + "\n## Goal:\n\n" + str_or_empty(obs, "goal") + "\n";
  if (obs.contains("goal_images")) {
    for (const auto& img : obs["goal_images"]) {
      instructions += fmt::format("[image: {}]\n", img.get<std::string>());
    }
  }
  if (!flags.extra_instructions.empty()) {
    instructions += "\n## Extra instructions:\n\n" + flags.extra_instructions + "\n";
  }
  // Messages after the goal (user follow-ups, feedback, own replies).
  if (obs.contains("chat") && obs["chat"].size() > 1) {
    instructions += "\n## Chat messages:\n\n";
    for (std::size_t i = 1; i < obs["chat"].size(); ++i) {
      const auto& m = obs["chat"][i];
      instructions += fmt::format("[{}] {}\n", m.at("role").get<std::string>(),
                                  m.at("text").get<std::string>());
    }
  }
  out.push_back(PromptComponent::fixed("instructions", instructions));

  std::string obs_head = "# Observation of current step:\n";
  if (flags.obs.use_tabs && obs.contains("tabs")) {
    obs_head += "\n## Currently open tabs:\n";
    const std::size_t active = obs.value("active_tab", std::size_t{0});
    for (std::size_t i = 0; i < obs["tabs"].size(); ++i) {
      const auto& t = obs["tabs"][i];
      obs_head += fmt::format("Tab {}{}:\n    Title: {}\n    URL: {}\n", i,
                              i == active ? " (active tab)" : "", t.at("title").get<std::string>(),
                              t.at("url").get<std::string>());
    }
  }
  out.push_back(PromptComponent::fixed("observation", obs_head));

  std::string title;
  if (obs.contains("tabs") && !obs["tabs"].empty()) {
    const std::size_t active = obs.value("active_tab", std::size_t{0});
    if (active < obs["tabs"].size()) title = obs["tabs"][active].at("title").get<std::string>();
  }
  if (flags.obs.use_axtree && obs.contains("axtree_txt")) {
    std::string header = "## AXTree:\n" + kAxtreeNotes + "\n" + fmt::format("RootWebArea '{}'\n", title);
    out.push_back(PromptComponent::text("axtree", header,
                                        indent_lines(str_or_empty(obs, "axtree_txt"), "  "), 2,
                                        ShrinkStrategy::truncate_bottom, "\n"));
  }
  if (flags.obs.use_html && obs.contains("html_txt")) {
    out.push_back(PromptComponent::text("html", "## HTML:\n", str_or_empty(obs, "html_txt"), 1,
                                        ShrinkStrategy::truncate_bottom, "\n"));
  }
  if (flags.obs.use_focused_element) {
    auto it = obs.find("focused_element_bid");
    const std::string bid = it != obs.end() && it->is_string() ? it->get<std::string>() : "";
    out.push_back(PromptComponent::fixed(
        "focused_element", bid.empty() ? "## Focused element:\nNone\n"
                                       : fmt::format("## Focused element:\nbid='{}'\n", bid)));
  }
  if (flags.obs.use_error_logs) {
    const std::string err = str_or_empty(obs, "last_action_error");
    if (!err.empty()) {
      out.push_back(
          PromptComponent::fixed("error", "## Error from previous action:\n" + err + "\n"));
    }
  }

  if (flags.obs.use_history && !history.empty()) {
    std::vector<std::string> entries;
    for (std::size_t k = 0; k < history.size(); ++k) {
      entries.push_back(render_history_step(flags, k, history[k]));
    }
    auto h = PromptComponent::history("history", "# History of interaction with the task:\n\n",
                                      std::move(entries), 0);
    h.footer = "\n";
    out.push_back(std::move(h));
  }

  ActionSetConfig as = flags.action.action_set_config();
  out.push_back(PromptComponent::fixed(
      "action_space", "# Action space:\n" + kActionSpaceNote + "\n\n" + describe(as) +
                          "\n\n" + kActionTips + "\n"));

  if (flags.use_abstract_example) {
    std::string s = kAbstractExample;
    if (flags.use_thinking) s += "\n" + kAbstractThink;
    s += "\n" + kAbstractAction + "\n";
    out.push_back(PromptComponent::fixed("abstract_example", s));
  }
  if (flags.use_concrete_example) {
    std::string s = kConcreteExample;
    if (flags.use_thinking) s += "\n" + kConcreteThink;
    s += "\n" + kConcreteAction;
    out.push_back(PromptComponent::fixed("concrete_example", s));
  }
  return out;
}

GenericAgent::GenericAgent(GenericFlags flags, std::unique_ptr<ChatModel> model,
                           TokenCounter counter)
    : flags_(std::move(flags)),
      model_(std::move(model)),
      counter_(std::move(counter)),
      action_set_((flags_.validate(), flags_.action.action_set_config())) {
  if (!model_) throw ConfigError("GenericAgent needs a model");
}

void GenericAgent::begin_episode(const EpisodeContext&) { history_.clear(); }

ProcessedObs GenericAgent::obs_preprocessor(const Observation& obs) {
  return generic_preprocess(flags_.obs, obs);
}

AgentStep GenericAgent::get_action(const ProcessedObs& obs) {
  if (!history_.empty()) history_.back().error = str_or_empty(obs, "last_action_error");

  const std::string& system = generic_system_message();
  const std::size_t system_tokens = counter_(system);
  if (system_tokens >= flags_.max_prompt_tokens) {
    throw ConfigError("max_prompt_tokens leaves no room for the prompt");
  }
  FitResult fit = fit_tokens(build_generic_prompt(flags_, obs, history_),
                             flags_.max_prompt_tokens - system_tokens, counter_);

  std::vector<LlmMessage> messages = {{LlmMessage::Role::system, system},
                                      {LlmMessage::Role::user, fit.text}};
  AgentStep step;
  Usage usage;
  double latency = 0;
  std::string last_error;
  int calls = 0;
  for (; calls < kMaxAnswerAttempts;) {
    Completion c = model_->complete(messages);
    ++calls;
    usage += c.usage;
    latency += static_cast<double>(c.latency_ms);
    messages.push_back({LlmMessage::Role::assistant, c.text});

    auto parsed = parse_answer(c.text);
    if (auto* err = std::get_if<AnswerError>(&parsed)) {
      last_error = err->message;
    } else {
      const auto& answer = std::get<ParsedAnswer>(parsed);
      auto action = action_set_.parse(answer.action);
      if (auto* perr = std::get_if<ParseError>(&action)) {
        last_error = perr->message;
      } else {
        step.action = answer.action;
        step.info.think = answer.think;
        last_error.clear();
        break;
      }
    }
    if (calls < kMaxAnswerAttempts) {
      messages.push_back(
          {LlmMessage::Role::user,
           fmt::format("Your previous answer could not be used: {}\nAnswer again following the "
                       "format, with exactly one action inside <action></action> tags.",
                       last_error)});
    }
  }

  step.failed = !last_error.empty();
  step.info.chat_messages = std::move(messages);
  step.info.tokens = usage;
  step.info.stats = {{"n_retry", static_cast<double>(calls - 1)},
                     {"n_model_calls", static_cast<double>(calls)},
                     {"prompt_tokens", static_cast<double>(fit.tokens)},
                     {"prompt_overflow", fit.overflow ? 1.0 : 0.0},
                     {"shrink_steps", static_cast<double>(fit.shrink_log.size())},
                     {"model_latency_ms", latency},
                     {"input_tokens", static_cast<double>(usage.prompt_tokens)},
                     {"output_tokens", static_cast<double>(usage.completion_tokens)},
                     {"cost", usage.cost}};
  if (step.failed) {
    step.info.extra["failure"] =
        fmt::format("no usable answer after {} attempts: {}", calls, last_error);
  } else {
    history_.push_back({step.info.think, step.action, {}});
  }
  return step;
}

}  // namespace wgym
