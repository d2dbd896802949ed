#include <gtest/gtest.h>

#include "wgym/agent/agent_args.hpp"
#include "wgym/agent/answer.hpp"
#include "wgym/agent/builtin_agents.hpp"
#include "wgym/agent/generic_agent.hpp"
#include "wgym/common/errors.hpp"
#include "wgym/env/environment.hpp"
#include "wgym/llm/scripted.hpp"
#include "wgym/tasks/registry.hpp"
#include "wgym/tasks/synthetic.hpp"

namespace wgym {
namespace {

const std::string kConcrete =
    "<think>\n"
    "From previous action I tried to set the value of year to \"2022\",\n"
    "using select_option, but it doesn't appear to be in the form. It may be a\n"
    "dynamic dropdown, I will try using click with the bid \"a324\" and look at the\n"
    "response from the page.\n"
    "</think>\n"
    "<action>\n"
    "click('a324')\n"
    "</action>\n";

std::unique_ptr<ScriptedModel> scripted(std::vector<std::string> responses) {
  std::vector<ScriptRule> rules;
  for (auto& r : responses) rules.push_back({std::nullopt, std::move(r)});
  return std::make_unique<ScriptedModel>(std::move(rules));
}

std::string answer(const std::string& action) { return "<action>" + action + "</action>"; }

TEST(ParseAnswer, ConcreteExample) {
  auto r = parse_answer(kConcrete);
  ASSERT_TRUE(std::holds_alternative<ParsedAnswer>(r));
  const auto& a = std::get<ParsedAnswer>(r);
  EXPECT_EQ(a.action, "click('a324')");
  EXPECT_EQ(a.think.rfind("From previous action I tried", 0), 0u);
}

TEST(ParseAnswer, ActionOnly) {
  auto r = parse_answer("  <action> noop() </action>");
  ASSERT_TRUE(std::holds_alternative<ParsedAnswer>(r));
  EXPECT_EQ(std::get<ParsedAnswer>(r), (ParsedAnswer{"", "noop()"}));
}

TEST(ParseAnswer, LastBlockWins) {
  auto r = parse_answer("<think>a</think><action>noop()</action><think>b</think>"
                        "<action>click('1')</action>");
  ASSERT_TRUE(std::holds_alternative<ParsedAnswer>(r));
  EXPECT_EQ(std::get<ParsedAnswer>(r), (ParsedAnswer{"b", "click('1')"}));
}

TEST(ParseAnswer, MissingOrEmptyAction) {
  EXPECT_TRUE(std::holds_alternative<AnswerError>(parse_answer("I would click")));
  EXPECT_TRUE(std::holds_alternative<AnswerError>(parse_answer("<action>  </action>")));
  EXPECT_TRUE(std::holds_alternative<AnswerError>(parse_answer("<action>click('1')")));
}

TEST(GenericFlags, Defaults) {
  GenericFlags f;
  EXPECT_TRUE(f.obs.use_axtree);
  EXPECT_FALSE(f.obs.use_html);
  EXPECT_TRUE(f.obs.use_think_history);
  EXPECT_TRUE(f.obs.use_error_logs);
  EXPECT_TRUE(f.use_thinking);
  EXPECT_FALSE(f.obs.use_screenshot);
  EXPECT_NO_THROW(f.validate());
}

TEST(GenericFlags, BenchmarkAdjustment) {
  GenericFlags f;
  f.set_benchmark("miniwob-shape");
  EXPECT_TRUE(f.obs.use_html);
  GenericFlags g;
  g.set_benchmark("synthetic");
  EXPECT_FALSE(g.obs.use_html);
}

TEST(GenericFlags, RejectsUnsupported) {
  GenericFlags a;
  a.obs.use_screenshot = true;
  EXPECT_THROW(a.validate(), ConfigError);
  GenericFlags b;
  b.action.multi_actions = true;
  EXPECT_THROW(b.validate(), ConfigError);
  GenericFlags c;
  c.obs.use_axtree = false;
  EXPECT_THROW(c.validate(), ConfigError);
  GenericFlags d;
  d.use_plan = true;
  EXPECT_THROW(d.validate(), ConfigError);
}

TEST(GenericPrompt, ContainsObservationSections) {
  auto env = make_env("example.einstein");
  env->reset(0);
  auto r = env->step("click('241')");
  (void)r;
  env->step("fill('999', 'x')");
  GenericFlags flags;
  auto obs = generic_preprocess(flags.obs, env->observation());
  EXPECT_FALSE(obs.contains("html_txt"));
  const std::string text =
      concat(build_generic_prompt(flags, obs, {{"thinking hard", "click('241')", ""}}));
  EXPECT_NE(text.find("Which year was einstein born?"), std::string::npos);
  EXPECT_NE(text.find("## AXTree:"), std::string::npos);
  EXPECT_EQ(text.find("## HTML:"), std::string::npos);
  EXPECT_NE(text.find("## Error from previous action:"), std::string::npos);
  EXPECT_NE(text.find("thinking hard"), std::string::npos);
  EXPECT_NE(text.find("# Action space:"), std::string::npos);
  EXPECT_NE(text.find("click('a324')"), std::string::npos);
}

TEST(GenericPrompt, InterceptedClickErrorReachesPrompt) {
  auto env = make_env("example.einstein");
  env->reset(0);
  const auto& page = env->browser().active_page();
  auto box = page.find_first([](const Node& n) { return n.tag == "textarea"; });
  ASSERT_TRUE(box);
  env->step("fill('" + page.node(*box).bid + "', 'einstein')");
  env->step("click('241')");
  GenericFlags flags;
  const std::string text =
      concat(build_generic_prompt(flags, generic_preprocess(flags.obs, env->observation()), {}));
  EXPECT_NE(text.find("Timeout 500ms exceeded"), std::string::npos);
}

TEST(GenericPrompt, ChatFollowUpsAreListed) {
  auto env = make_env("example.einstein");
  env->reset(0);
  env->send_user_message("use the search box");
  GenericFlags flags;
  const std::string text =
      concat(build_generic_prompt(flags, generic_preprocess(flags.obs, env->observation()), {}));
  EXPECT_NE(text.find("use the search box"), std::string::npos);
}

TEST(GenericAgent, RetriesGarbageThenSucceeds) {
  auto model = scripted({"no tags here", answer("noop()")});
  auto* raw = model.get();
  GenericAgent agent(GenericFlags{}, std::move(model));
  auto env = make_env("example.einstein");
  auto [obs, info] = env->reset(0);
  agent.begin_episode({"example.einstein", 0});
  auto step = agent.get_action(agent.obs_preprocessor(obs));
  EXPECT_FALSE(step.failed);
  EXPECT_EQ(step.action, "noop()");
  EXPECT_EQ(step.info.stats.at("n_retry"), 1.0);
  EXPECT_EQ(raw->calls(), 2u);
  // system, user, bad answer, correction, good answer
  EXPECT_EQ(step.info.chat_messages.size(), 5u);
  EXPECT_EQ(agent.history().size(), 1u);
}

TEST(GenericAgent, InvalidDslIsRetried) {
  auto model = scripted({answer("clik('1')"), answer("noop()")});
  GenericAgent agent(GenericFlags{}, std::move(model));
  auto env = make_env("example.einstein");
  auto [obs, info] = env->reset(0);
  auto step = agent.get_action(agent.obs_preprocessor(obs));
  EXPECT_EQ(step.info.stats.at("n_retry"), 1.0);
  EXPECT_EQ(step.action, "noop()");
}

TEST(GenericAgent, FailsAfterFourAttempts) {
  auto model = scripted({"a", "b", "c", "d", answer("noop()")});
  auto* raw = model.get();
  GenericAgent agent(GenericFlags{}, std::move(model));
  auto env = make_env("example.einstein");
  auto [obs, info] = env->reset(0);
  auto step = agent.get_action(agent.obs_preprocessor(obs));
  EXPECT_TRUE(step.failed);
  EXPECT_EQ(raw->calls(), 4u);
  EXPECT_EQ(step.info.stats.at("n_retry"), 3.0);
  EXPECT_TRUE(step.info.extra.count("failure"));
  EXPECT_TRUE(agent.history().empty());
}

TEST(GenericAgent, PromptRespectsBudget) {
  GenericFlags flags;
  flags.obs.use_html = true;
  flags.max_prompt_tokens = 1200;
  std::size_t seen = 0;
  auto model = std::make_unique<ScriptedModel>([&](const std::vector<LlmMessage>& m) {
    seen = count_tokens(m[0].content) + count_tokens(m[1].content);
    return answer("noop()");
  });
  GenericAgent agent(flags, std::move(model));
  auto env = make_env("synth.login-form");
  auto [obs, info] = env->reset(0);
  for (int i = 0; i < 5; ++i) {
    auto step = agent.get_action(agent.obs_preprocessor(env->observation()));
    EXPECT_LE(seen, 1200u);
    env->step(step.action);
  }
}

TEST(GenericAgent, UsageIsTracked) {
  ModelArgs args;
  args.model_name = "scripted:noop";
  args.price_per_1k_prompt = 1.0;
  GenericAgent agent(GenericFlags{}, make_model(args));
  auto env = make_env("example.einstein");
  auto [obs, info] = env->reset(0);
  auto step = agent.get_action(agent.obs_preprocessor(obs));
  EXPECT_GT(step.info.tokens.prompt_tokens, 0);
  EXPECT_GT(step.info.tokens.cost, 0.0);
}

TEST(OracleAgent, SolvesEverySyntheticTask) {
  for (const auto& id : synthetic_task_ids()) {
    auto env = make_env(id);
    auto [obs, info] = env->reset(1);
    OracleAgent agent;
    EpisodeContext ctx{id, 1};
    ctx.task = &env->task();
    agent.begin_episode(ctx);
    StepResult r;
    while (!env->episode().done) {
      auto step = agent.get_action(agent.obs_preprocessor(env->observation()));
      ASSERT_FALSE(step.failed) << id;
      r = env->step(step.action);
    }
    EXPECT_EQ(r.reward, 1.0) << id;
  }
}

TEST(OracleAgent, NeedsTask) {
  OracleAgent agent;
  EXPECT_THROW(agent.begin_episode({"synth.click-button", 0}), UsageError);
}

TEST(RandomAgent, DeterministicAndParseable) {
  auto env = make_env("synth.login-form");
  auto [obs, info] = env->reset(3);
  RandomAgent a(5), b(5);
  a.begin_episode({"synth.login-form", 3});
  b.begin_episode({"synth.login-form", 3});
  ActionSet set(ActionSetConfig{});
  for (int i = 0; i < 50; ++i) {
    auto sa = a.get_action(a.obs_preprocessor(obs));
    auto sb = b.get_action(b.obs_preprocessor(obs));
    EXPECT_EQ(sa.action, sb.action);
    EXPECT_TRUE(std::holds_alternative<ParsedAction>(set.parse(sa.action))) << sa.action;
  }
}

TEST(RandomAgent, RespectsCategories) {
  EpisodeContext ctx{"synth.click-button", 0};
  ctx.action_categories = {ActionCategory::misc};
  RandomAgent a(1);
  a.begin_episode(ctx);
  ActionSetConfig cfg;
  cfg.enabled_categories = {ActionCategory::misc};
  ActionSet set(cfg);
  for (int i = 0; i < 30; ++i) {
    auto s = a.get_action({{"bids", {"1"}}, {"tabs", 1}});
    EXPECT_TRUE(std::holds_alternative<ParsedAction>(set.parse(s.action))) << s.action;
  }
}

TEST(ReplayAgent, EmitsThenFails) {
  ReplayAgent r({"noop()", "click('1')"});
  r.begin_episode({});
  EXPECT_EQ(r.get_action({}).action, "noop()");
  EXPECT_EQ(r.get_action({}).action, "click('1')");
  EXPECT_TRUE(r.get_action({}).failed);
}

TEST(AgentArgs, FlatRoundTrip) {
  AgentArgs a = generic_agent_args("scripted:noop");
  a.flags.obs.use_html = true;
  a.flags.max_prompt_tokens = 1234;
  a.flags.action.action_categories = {ActionCategory::bid, ActionCategory::nav};
  a.model.temperature = 0.5;
  auto flat = a.to_flat();
  EXPECT_EQ(flat.at("flags.obs.use_html"), "true");
  EXPECT_EQ(AgentArgs::from_flat(flat), a);
  nlohmann::json j = a;
  EXPECT_EQ(j.get<AgentArgs>(), a);
}

TEST(AgentArgs, UnknownKeyAndBadValue) {
  EXPECT_THROW(AgentArgs::from_flat({{"flags.obs.use_telepathy", "true"}}), ConfigError);
  EXPECT_THROW(AgentArgs::from_flat({{"flags.obs.use_html", "maybe"}}), ConfigError);
  EXPECT_THROW(AgentArgs::from_flat({{"kind", "psychic"}}), ConfigError);
}

TEST(AgentArgs, MakeAgentByKind) {
  EXPECT_TRUE(dynamic_cast<OracleAgent*>(oracle_agent_args().make_agent().get()));
  EXPECT_TRUE(dynamic_cast<RandomAgent*>(random_agent_args(2).make_agent().get()));
  EXPECT_TRUE(dynamic_cast<GenericAgent*>(generic_agent_args("scripted:noop").make_agent().get()));
  EXPECT_THROW(generic_agent_args("scripted:nope").make_agent(), ConfigError);
}

}  // namespace
}  // namespace wgym
