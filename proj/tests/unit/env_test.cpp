#include <gtest/gtest.h>

#include "wgym/common/errors.hpp"
#include "wgym/common/rng.hpp"
#include "wgym/env/environment.hpp"
#include "wgym/observation/flatten.hpp"
#include "wgym/tasks/registry.hpp"
#include "wgym/tasks/synthetic.hpp"

namespace wgym {
namespace {

class CountingTask : public Task {
 public:
  Goal setup(SimBrowser& b, std::uint64_t) override {
    b.register_page("local://count", [](PageModel& p, std::uint64_t) {
      p.append(p.root(), "button", {{"id", "b"}}, "press me");
    });
    open_page(b, "local://count");
    return {ContentPart::text("count to nothing")};
  }
  Validation validate(const SimBrowser&, const std::vector<ChatMessage>&) const override {
    return {0.0, false, std::nullopt};
  }
};

std::string flat(const Observation& o) {
  return flatten_axtree(o.axtree) + "\n" + flatten_html(o.dom);
}

TEST(MakeEnv, UnknownTask) {
  try {
    make_env("nonexistent");
    FAIL();
  } catch (const RegistrationError& e) {
    EXPECT_NE(std::string(e.what()).find("unknown task"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("nonexistent"), std::string::npos);
  }
}

TEST(MakeEnv, RegisteredTaskIsUnreset) {
  auto env = make_env("synth.choose-list");
  EXPECT_FALSE(env->is_reset());
  EXPECT_THROW(env->step("noop()"), UsageError);
}

TEST(MakeEnv, CustomRegistry) {
  TaskRegistry r;
  r.register_task("mynewtask", [] { return std::make_unique<CountingTask>(); });
  auto env = make_env("mynewtask", {}, r);
  auto [obs, info] = env->reset(0);
  EXPECT_EQ(goal_text(obs.goal_object), "count to nothing");
  EXPECT_EQ(info.at("task_id"), "mynewtask");
}

TEST(Reset, EinsteinGoalInChat) {
  auto env = make_env("example.einstein");
  auto [obs, info] = env->reset(0);
  EXPECT_EQ(goal_text(obs.goal_object), "Which year was einstein born?");
  ASSERT_EQ(obs.chat_messages.size(), 1u);
  EXPECT_EQ(obs.chat_messages[0].role, ChatRole::user);
  EXPECT_EQ(obs.chat_messages[0].text(), "Which year was einstein born?");
  EXPECT_EQ(obs.last_action_error, "");
  EXPECT_EQ(env->episode().step_index, 0);
}

TEST(Reset, SameSeedSameObservation) {
  for (const auto& id : synthetic_task_ids()) {
    auto env = make_env(id);
    auto a = env->reset(4).first;
    auto b = env->reset(4).first;
    EXPECT_EQ(flat(a), flat(b)) << id;
    EXPECT_EQ(env->episode().chat.size(), 1u);
  }
}

TEST(Step, EinsteinCorrectAnswer) {
  auto env = make_env("example.einstein");
  env->reset(0);
  auto r = env->step("send_msg_to_user(\"1879\")");
  EXPECT_EQ(r.reward, 1.0);
  EXPECT_TRUE(r.terminated);
  const auto& chat = r.observation.chat_messages;
  ASSERT_EQ(chat.size(), 3u);
  EXPECT_EQ(chat[1].role, ChatRole::assistant);
  EXPECT_EQ(chat[2].role, ChatRole::user_feedback);
  EXPECT_EQ(chat[2].text(), "That's correct");
  EXPECT_THROW(env->step("noop()"), UsageError);
}

TEST(Step, EinsteinWrongAnswerAddsNoFeedback) {
  auto env = make_env("example.einstein");
  env->reset(0);
  auto r = env->step("send_msg_to_user('1900')");
  EXPECT_EQ(r.reward, 0.0);
  EXPECT_TRUE(r.terminated);
  EXPECT_EQ(r.observation.chat_messages.size(), 2u);
}

TEST(Step, InterceptedClickReportsTimeout) {
  auto env = make_env("example.einstein");
  env->reset(0);
  auto r1 = env->step("fill('999', 'x')");
  EXPECT_NE(r1.observation.last_action_error, "");
  // Typing into the search box opens a suggestion list over the button.
  const auto& page = env->browser().active_page();
  auto box = page.find_first([](const Node& n) { return n.tag == "textarea"; });
  ASSERT_TRUE(box);
  auto r2 = env->step("fill('" + page.node(*box).bid + "', 'einstein')");
  EXPECT_EQ(r2.observation.last_action_error, "");
  auto r3 = env->step("click('241')");
  EXPECT_EQ(r3.reward, 0.0);
  EXPECT_NE(r3.observation.last_action_error.find("Timeout 500ms exceeded"), std::string::npos);
  auto r4 = env->step("noop()");
  EXPECT_EQ(r4.observation.last_action_error, "");
}

TEST(Step, TruncatesAtMaxSteps) {
  TaskRegistry r;
  r.register_task("counting", [] { return std::make_unique<CountingTask>(); });
  EnvConfig cfg;
  cfg.max_steps = 10;
  auto env = make_env("counting", cfg, r);
  env->reset(0);
  for (int i = 1; i <= 10; ++i) {
    auto res = env->step("noop()");
    EXPECT_EQ(env->episode().step_index, i);
    EXPECT_EQ(res.truncated, i == 10);
    EXPECT_FALSE(res.terminated);
  }
  EXPECT_THROW(env->step("noop()"), UsageError);
}

TEST(Step, ParseErrorBecomesFeedback) {
  auto env = make_env("example.einstein");
  env->reset(0);
  auto r = env->step("clik('a')");
  EXPECT_NE(r.observation.last_action_error.find("clik"), std::string::npos);
  EXPECT_EQ(r.info.at("action"), "");
}

TEST(Step, DisabledCategoryIsRejected) {
  EnvConfig cfg;
  cfg.action_subset = {ActionCategory::bid};
  auto env = make_env("example.einstein", cfg);
  env->reset(0);
  auto r = env->step("goto('http://google.com')");
  EXPECT_NE(r.observation.last_action_error, "");
}

TEST(Step, FuzzedInputNeverThrows) {
  SeededStream rng("env-fuzz", 9);
  auto env = make_env("synth.login-form");
  env->reset(0);
  for (int i = 0; i < 300; ++i) {
    if (env->episode().done) env->reset(static_cast<std::uint64_t>(i));
    std::string s;
    const auto n = rng.below(40);
    for (std::uint64_t k = 0; k < n; ++k) s.push_back(static_cast<char>(rng.below(256)));
    StepResult r;
    ASSERT_NO_THROW(r = env->step(s));
    EXPECT_NE(r.observation.last_action_error, "") << s;
  }
}

TEST(Step, RewardComesFromValidate) {
  auto env = make_env("synth.click-button");
  env->reset(2);
  const auto oracle = env->task().oracle_actions();
  ASSERT_FALSE(oracle.empty());
  StepResult r;
  for (const auto& a : oracle) r = env->step(a);
  EXPECT_EQ(r.reward, env->task().validate(env->browser(), env->episode().chat).reward);
  EXPECT_EQ(r.reward, 1.0);
}

TEST(SendUserMessage, AppendsInOrderAndKeepsGoal) {
  auto env = make_env("example.einstein");
  env->reset(0);
  env->send_user_message("please retry");
  env->send_user_message("and hurry");
  const auto& obs = env->observation();
  ASSERT_EQ(obs.chat_messages.size(), 3u);
  EXPECT_EQ(obs.chat_messages[1].text(), "please retry");
  EXPECT_EQ(obs.chat_messages[2].text(), "and hurry");
  EXPECT_EQ(goal_text(obs.goal_object), "Which year was einstein born?");
  auto r = env->step("noop()");
  EXPECT_EQ(r.observation.chat_messages[1].text(), "please retry");
}

TEST(Traces, SinkReceivesEachStep) {
  EnvConfig cfg;
  cfg.record_traces = true;
  auto env = make_env("example.einstein", cfg);
  std::vector<StepTrace> traces;
  env->set_trace_sink([&](const StepTrace& t) { traces.push_back(t); });
  env->reset(0);
  env->step("noop()");
  env->step("send_msg_to_user('1879')");
  ASSERT_EQ(traces.size(), 2u);
  EXPECT_EQ(traces[0].step, 1);
  EXPECT_EQ(traces[1].parsed_action, "send_msg_to_user(\"1879\")");
  EXPECT_EQ(traces[1].reward, 1.0);
  nlohmann::json j = traces[1];
  EXPECT_EQ(j.get<StepTrace>().action_text, traces[1].action_text);
}

TEST(EnvConfig, Validation) {
  EnvConfig c;
  c.max_steps = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  EnvConfig d;
  d.action_subset.clear();
  EXPECT_THROW(d.validate(), ConfigError);
}

}  // namespace
}  // namespace wgym
