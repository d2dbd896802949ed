#include <gtest/gtest.h>

#include "wgym/backend/browser.hpp"
#include "wgym/backend/layout.hpp"
#include "wgym/common/errors.hpp"
#include "wgym/common/rng.hpp"
#include "wgym/tasks/examples.hpp"

namespace wgym {
namespace {

constexpr int kTimeout = 500;

std::optional<CommandError> run(SimBrowser& b, BackendCommand c) { return b.execute(c, kTimeout); }

void form_page(PageModel& p, std::uint64_t) {
  p.set_title("Form");
  NodeId name = p.append(p.root(), "input", {{"type", "text"}, {"id", "name"}});
  p.on(name, PageEvent::input, [](PageModel& page, const EventContext& ev) {
    page.state()["typed"] = page.attr(ev.target, "value").value_or("");
  });
  NodeId btn = p.append(p.root(), "button", {{"id", "go"}}, "Go");
  p.on(btn, PageEvent::click, [](PageModel& page, const EventContext&) {
    page.state()["clicks"] += "x";
  });
  NodeId sel = p.append(p.root(), "select", {{"id", "pick"}});
  p.append(sel, "option", {{"value", "a"}}, "Alpha");
  p.append(sel, "option", {{"value", "b"}}, "Beta");
  NodeId list = p.append(p.root(), "ul", {{"id", "list"}});
  p.append(list, "li", {{"id", "one"}}, "one");
  p.append(list, "li", {{"id", "two"}}, "two");
  p.append(p.root(), "input", {{"type", "file"}, {"id", "file"}});
}

NodeId by_id(const PageModel& p, const std::string& id) {
  auto n = p.find_first([&](const Node& node) {
    const auto* v = node.attr("id");
    return v && *v == id;
  });
  EXPECT_TRUE(n.has_value()) << id;
  return *n;
}

std::string bid(const SimBrowser& b, const std::string& id) {
  return b.active_page().node(by_id(b.active_page(), id)).bid;
}

SimBrowser form_browser(std::uint64_t seed = 0) {
  SimBrowser b(seed);
  b.register_page("local://form", form_page);
  EXPECT_FALSE(run(b, cmd::Goto{"local://form"}));
  return b;
}

TEST(SimBrowser, StartsWithOneBlankTab) {
  SimBrowser b;
  ASSERT_EQ(b.tabs().tabs.size(), 1u);
  EXPECT_EQ(b.active_page().url(), "about:blank");
}

TEST(SimBrowser, GotoUnregisteredUrlIsNavigationFailure) {
  SimBrowser b;
  auto err = run(b, cmd::Goto{"local://nope"});
  ASSERT_TRUE(err);
  EXPECT_EQ(err->kind, CommandError::Kind::navigation_failed);
  EXPECT_NE(err->message.find("local://nope"), std::string::npos);
}

TEST(SimBrowser, DuplicateRegistrationThrows) {
  SimBrowser b;
  b.register_page("local://choose-list", form_page);
  EXPECT_THROW(b.register_page("local://choose-list", form_page), RegistrationError);
  EXPECT_FALSE(run(b, cmd::Goto{"local://choose-list"}));
  EXPECT_EQ(b.active_page().url(), "local://choose-list");
}

TEST(SimBrowser, FillSetsValueAndFiresInputHandler) {
  auto b = form_browser();
  EXPECT_FALSE(run(b, cmd::Fill{BidTarget{bid(b, "name")}, "hello"}));
  const auto& p = b.active_page();
  EXPECT_EQ(p.attr(by_id(p, "name"), "value"), "hello");
  EXPECT_EQ(p.state().at("typed"), "hello");
}

TEST(SimBrowser, ClickRunsHandler) {
  auto b = form_browser();
  EXPECT_FALSE(run(b, cmd::Click{BidTarget{bid(b, "go")}}));
  EXPECT_EQ(b.active_page().state().at("clicks"), "x");
}

TEST(SimBrowser, ClickOnInterceptedElementTimesOut) {
  auto b = form_browser();
  auto& p = b.active_page();
  NodeId go = by_id(p, "go");
  const Box box = p.node(go).box;
  NodeId overlay = p.append(p.root(), "div", {{"class", "overlay"}});
  p.set_box(overlay, Box{0, box.top - 5, 800, box.height + 10});
  p.set_intercepts_pointer(overlay);
  layout(p);
  auto err = run(b, cmd::Click{BidTarget{p.node(go).bid}});
  ASSERT_TRUE(err);
  EXPECT_EQ(err->kind, CommandError::Kind::intercepted);
  EXPECT_NE(err->message.find("Timeout 500ms exceeded"), std::string::npos);
  EXPECT_NE(err->message.find("intercepts pointer events"), std::string::npos);
  EXPECT_EQ(b.active_page().state().count("clicks"), 0u);
  EXPECT_GE(b.clock_ms(), 500);
}

TEST(SimBrowser, UnknownBidNamesTheTarget) {
  auto b = form_browser();
  auto err = run(b, cmd::Click{BidTarget{"999"}});
  ASSERT_TRUE(err);
  EXPECT_EQ(err->kind, CommandError::Kind::not_found);
  EXPECT_NE(err->message.find("999"), std::string::npos);
  auto loc = b.locate("999");
  EXPECT_TRUE(std::holds_alternative<CommandError>(loc));
}

TEST(SimBrowser, LocateFindsVoteButton) {
  SimBrowser b;
  b.register_page(kVotePageUrl, [](PageModel& p, std::uint64_t) { build_vote_page(p); });
  ASSERT_FALSE(run(b, cmd::Goto{kVotePageUrl}));
  auto loc = b.locate("169");
  ASSERT_TRUE(std::holds_alternative<NodeId>(loc));
  EXPECT_EQ(*b.active_page().attr(std::get<NodeId>(loc), "title"), "Upvote");
}

TEST(SimBrowser, LocateIsScopedToActiveTab) {
  auto b = form_browser();
  const std::string go = bid(b, "go");
  ASSERT_FALSE(run(b, cmd::NewTab{}));
  EXPECT_TRUE(std::holds_alternative<CommandError>(b.locate(go)));
  ASSERT_FALSE(run(b, cmd::TabFocus{0}));
  EXPECT_TRUE(std::holds_alternative<NodeId>(b.locate(go)));
}

TEST(SimBrowser, HiddenElementIsNotVisible) {
  auto b = form_browser();
  auto& p = b.active_page();
  p.set_attr(by_id(p, "go"), "hidden", "");
  layout(p);
  auto err = run(b, cmd::Click{BidTarget{p.node(by_id(p, "go")).bid}});
  ASSERT_TRUE(err);
  EXPECT_NE(err->message.find("Timeout 500ms exceeded"), std::string::npos);
}

TEST(SimBrowser, DisabledElementIsNotEnabled) {
  auto b = form_browser();
  auto& p = b.active_page();
  p.set_attr(by_id(p, "go"), "disabled", "");
  auto err = run(b, cmd::Click{BidTarget{p.node(by_id(p, "go")).bid}});
  ASSERT_TRUE(err);
  EXPECT_EQ(err->kind, CommandError::Kind::not_enabled);
  EXPECT_NE(err->message.find("Timeout 500ms exceeded"), std::string::npos);
  EXPECT_NE(err->message.find("not enabled"), std::string::npos);
}

TEST(SimBrowser, ScrollMovesViewportAndVisibility) {
  SimBrowser b;
  b.register_page("local://tall", [](PageModel& p, std::uint64_t) {
    p.append(p.root(), "button", {{"id", "go"}}, "Go");
    for (int i = 0; i < 60; ++i) p.append(p.root(), "p", {}, "filler " + std::to_string(i));
  });
  ASSERT_FALSE(run(b, cmd::Goto{"local://tall"}));
  const auto& p = b.active_page();
  const double before = visibility_ratio(p.node(by_id(p, "go")).box, p.viewport());
  ASSERT_FALSE(run(b, cmd::Scroll{0, 200}));
  EXPECT_DOUBLE_EQ(b.active_page().viewport().scroll_y, 200);
  EXPECT_EQ(before, 1.0);
  EXPECT_LT(visibility_ratio(b.active_page().node(by_id(p, "go")).box, b.active_page().viewport()),
            before);
}

TEST(SimBrowser, ScrollIsClampedToContent) {
  auto b = form_browser();
  ASSERT_FALSE(run(b, cmd::Scroll{0, 200}));
  EXPECT_DOUBLE_EQ(b.active_page().viewport().scroll_y, 0);
  ASSERT_FALSE(run(b, cmd::Scroll{-50, -50}));
  EXPECT_DOUBLE_EQ(b.active_page().viewport().scroll_x, 0);
}

TEST(SimBrowser, SelectOptionSetsValue) {
  auto b = form_browser();
  ASSERT_FALSE(run(b, cmd::SelectOption{BidTarget{bid(b, "pick")}, {"Beta"}}));
  const auto& p = b.active_page();
  EXPECT_EQ(p.attr(by_id(p, "pick"), "value"), "b");
  auto err = run(b, cmd::SelectOption{BidTarget{bid(b, "pick")}, {"Gamma"}});
  ASSERT_TRUE(err);
  EXPECT_NE(err->message.find("Gamma"), std::string::npos);
}

TEST(SimBrowser, PressFocusesTarget) {
  auto b1 = form_browser();
  auto b2 = form_browser();
  ASSERT_FALSE(run(b1, cmd::Press{BidTarget{bid(b1, "name")}, "a"}));
  ASSERT_FALSE(run(b2, cmd::Focus{BidTarget{bid(b2, "name")}}));
  ASSERT_FALSE(run(b2, cmd::KeyboardOp{cmd::KeyboardOp::Kind::press, "a"}));
  EXPECT_EQ(b1.active_page().focused(), by_id(b1.active_page(), "name"));
  EXPECT_EQ(b1.tabs(), b2.tabs());
}

TEST(SimBrowser, DragAndDropReordersUnderTargetParent) {
  auto b = form_browser();
  ASSERT_FALSE(run(b, cmd::DragAndDrop{BidTarget{bid(b, "two")}, BidTarget{bid(b, "one")}}));
  const auto& p = b.active_page();
  const auto& kids = p.node(by_id(p, "list")).children;
  ASSERT_EQ(kids.size(), 2u);
  EXPECT_EQ(kids[0], by_id(p, "two"));
}

TEST(SimBrowser, UploadRecordsFiles) {
  auto b = form_browser();
  ASSERT_FALSE(run(b, cmd::UploadFile{BidTarget{bid(b, "file")}, {"a.txt", "b.txt"}}));
  const auto& p = b.active_page();
  auto files = p.attr(by_id(p, "file"), "files");
  ASSERT_TRUE(files);
  EXPECT_NE(files->find("a.txt"), std::string::npos);
  EXPECT_NE(files->find("b.txt"), std::string::npos);
}

TEST(SimBrowser, HistoryIsPerTab) {
  SimBrowser b;
  b.register_page("local://a", form_page);
  b.register_page("local://b", form_page);
  ASSERT_FALSE(run(b, cmd::Goto{"local://a"}));
  ASSERT_FALSE(run(b, cmd::Goto{"local://b"}));
  ASSERT_FALSE(run(b, cmd::GoBack{}));
  EXPECT_EQ(b.active_page().url(), "local://a");
  ASSERT_FALSE(run(b, cmd::GoForward{}));
  EXPECT_EQ(b.active_page().url(), "local://b");
  ASSERT_FALSE(run(b, cmd::NewTab{}));
  EXPECT_EQ(b.tabs().active_index, 1u);
  EXPECT_EQ(b.active_page().url(), "about:blank");
  ASSERT_FALSE(run(b, cmd::GoBack{}));
  EXPECT_EQ(b.active_page().url(), "about:blank");
}

TEST(SimBrowser, TabCloseOnLastTabFails) {
  SimBrowser b;
  auto err = run(b, cmd::TabClose{});
  ASSERT_TRUE(err);
  ASSERT_FALSE(run(b, cmd::NewTab{}));
  ASSERT_FALSE(run(b, cmd::NewTab{}));
  ASSERT_FALSE(run(b, cmd::TabClose{}));
  EXPECT_EQ(b.tabs().tabs.size(), 2u);
  EXPECT_LT(b.tabs().active_index, b.tabs().tabs.size());
  EXPECT_TRUE(run(b, cmd::TabFocus{5}));
}

TEST(SimBrowser, FaultHookThrowsBackendFailure) {
  SimBrowser b;
  b.set_fault_hook([](const BackendCommand&) { throw BackendFailure("injected"); });
  EXPECT_THROW(run(b, cmd::Wait{10}), BackendFailure);
}

TEST(SimBrowser, SameSeedAndCommandsGiveEqualTabs) {
  SeededStream rng("backend-determinism", 1);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = form_browser(5);
    auto c = form_browser(5);
    const std::vector<std::string> ids = {"name", "go", "pick", "one", "two", "file"};
    for (int k = 0; k < 8; ++k) {
      const std::string id = rng.pick(ids);
      BackendCommand cmd;
      switch (rng.below(4)) {
        case 0: cmd = cmd::Click{BidTarget{bid(a, id)}}; break;
        case 1: cmd = cmd::Fill{BidTarget{bid(a, id)}, "v" + std::to_string(k)}; break;
        case 2: cmd = cmd::Scroll{0, static_cast<double>(rng.between(-100, 300))}; break;
        default: cmd = cmd::Hover{BidTarget{bid(a, id)}}; break;
      }
      EXPECT_EQ(run(a, cmd), run(c, cmd));
    }
    EXPECT_EQ(a.tabs(), c.tabs());
  }
}

TEST(SimBrowser, BuilderIsDeterministic) {
  SimBrowser a(3), c(3);
  a.register_page("local://form", form_page);
  c.register_page("local://form", form_page);
  ASSERT_FALSE(run(a, cmd::Goto{"local://form"}));
  ASSERT_FALSE(run(c, cmd::Goto{"local://form"}));
  EXPECT_EQ(a.active_page(), c.active_page());
}

TEST(Layout, StackedBlocksFlowDownward) {
  PageModel p("local://x");
  NodeId a = p.append(p.root(), "div", {}, "first");
  NodeId b = p.append(p.root(), "div", {}, "second");
  layout(p);
  EXPECT_DOUBLE_EQ(p.node(a).box.height, 30);
  EXPECT_DOUBLE_EQ(p.node(a).box.top, 0);
  EXPECT_DOUBLE_EQ(p.node(b).box.top, 30);
}

TEST(Layout, EmptyPageRootIsViewport) {
  PageModel p("local://x");
  layout(p);
  const auto& vp = p.viewport();
  EXPECT_EQ(p.node(p.root()).box, (Box{0, 0, vp.width, vp.height}));
}

TEST(Layout, OverrideKeptVerbatim) {
  PageModel p("local://x");
  NodeId a = p.append(p.root(), "div", {}, "x");
  p.set_box(a, Box{13, 17, 19, 23});
  layout(p);
  EXPECT_EQ(p.node(a).box, (Box{13, 17, 19, 23}));
}

TEST(Layout, VisibilityRatio) {
  Viewport vp;
  vp.height = 720;
  EXPECT_DOUBLE_EQ(visibility_ratio(Box{0, 670, 100, 100}, vp), 0.5);
  EXPECT_DOUBLE_EQ(visibility_ratio(Box{0, 10, 100, 100}, vp), 1.0);
  EXPECT_DOUBLE_EQ(visibility_ratio(Box{0, 10, 0, 0}, vp), 0.0);
}

TEST(Commands, JsonRoundTrip) {
  const std::vector<BackendCommand> cmds = {
      cmd::Click{BidTarget{"1"}, MouseButton::right, {"Shift"}, 2},
      cmd::Fill{PointTarget{3, 4}, "v"},
      cmd::SelectOption{BidTarget{"2"}, {"a", "b"}},
      cmd::Goto{"local://x"},
      cmd::Wait{1000},
      cmd::AppendChat{ChatRole::infeasible, "no"},
      cmd::KeyboardOp{cmd::KeyboardOp::Kind::type, "abc"},
  };
  for (const auto& c : cmds) {
    auto j = to_json(c);
    EXPECT_EQ(j.at("kind"), std::string(command_kind(c)));
    EXPECT_EQ(command_from_json(j), c);
  }
  CommandError e{CommandError::Kind::intercepted, "msg"};
  EXPECT_EQ(command_error_from_json(to_json(e)), e);
}

}  // namespace
}  // namespace wgym
