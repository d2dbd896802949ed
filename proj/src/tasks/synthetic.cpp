#include "wgym/tasks/synthetic.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "wgym/common/errors.hpp"
#include "wgym/common/rng.hpp"

namespace wgym {

namespace {

const std::string kBase = "local://synth/";

const std::vector<std::string> kWords = {
    "apple",  "banana", "cherry", "delta",  "ember",   "falcon", "garnet", "harbor",  "indigo",
    "jasper", "kettle", "lemon",  "maple",  "nectar",  "onyx",   "pepper", "quartz",  "raven",
    "saffron", "tulip", "umber",  "violet", "willow",  "yarrow", "zephyr"};

const std::vector<std::string> kUsers = {"alice", "bruno", "chen", "dana", "emil",
                                         "farah", "gus",   "hana", "ivan", "jo"};

const std::vector<std::string> kCategories = {"Garden", "Kitchen", "Books",
                                              "Toys",   "Music",   "Sports"};

std::vector<std::string> pick_distinct(SeededStream& rng, const std::vector<std::string>& pool,
                                       std::size_t k) {
  std::vector<std::string> out;
  for (auto i : rng.sample_indices(pool.size(), k)) out.push_back(pool[i]);
  return out;
}

bool has_text(const Node& n, std::string_view tag, std::string_view text) {
  return n.tag == tag && n.text == text;
}

bool has_id(const Node& n, std::string_view id) {
  const auto* v = n.attr("id");
  return v && *v == id;
}

std::string value_of(const PageModel& p, NodeId id) {
  auto v = p.attr(id, "value");
  return v ? *v : "";
}

void page_heading(PageModel& p, const std::string& title) {
  p.set_title(title);
  p.append(p.root(), "h1", {}, title);
}

// First value recorded under `key` in any open tab.
std::optional<std::string> tab_state(const SimBrowser& b, const std::string& key) {
  for (const auto& tab : b.tabs().tabs) {
    const auto& st = tab.page.state();
    if (auto it = st.find(key); it != st.end()) return it->second;
  }
  return std::nullopt;
}

bool gave_up(const std::vector<ChatMessage>& chat) {
  const auto* m = last_agent_message(chat);
  return m && m->role == ChatRole::infeasible;
}

Validation check(bool done, bool correct) { return {done && correct ? 1.0 : 0.0, done, {}}; }

class SynthTask : public Task {
 public:
  std::vector<std::string> oracle_actions() const override { return oracle_; }

 protected:
  // A submitted value settles the episode; report_infeasible fails it.
  Validation on_submit(const SimBrowser& b, const std::vector<ChatMessage>& chat,
                       const std::string& expected) const {
    if (auto got = tab_state(b, "submitted")) return check(true, *got == expected);
    if (gave_up(chat)) return {0, true, {}};
    return {};
  }

  std::vector<std::string> oracle_;
};

// A text input and a submit button inside a form that records the value.
void text_form(PageModel& p, const std::string& label) {
  NodeId form = p.append(p.root(), "form", {{"id", "entry"}});
  NodeId row = p.append(form, "div");
  p.append(row, "label", {{"for", "field"}}, label);
  NodeId input = p.append(row, "input", {{"id", "field"}, {"type", "text"}});
  p.append(form, "button", {{"type", "submit"}}, "Submit");
  p.on(form, PageEvent::submit, [input](PageModel& page, const EventContext&) {
    page.state()["submitted"] = value_of(page, input);
  });
}

class ClickButton : public SynthTask {
 public:
  Goal setup(SimBrowser& b, std::uint64_t seed) override {
    SeededStream rng("synth.click-button", seed);
    auto labels = pick_distinct(rng, kWords, static_cast<std::size_t>(rng.between(3, 6)));
    target_ = rng.pick(labels);
    const std::string url = kBase + "click-button";
    b.register_page(url, [labels](PageModel& p, std::uint64_t) {
      page_heading(p, "Buttons");
      NodeId row = p.append(p.root(), "div", {{"class", "buttons"}});
      for (const auto& label : labels) {
        NodeId btn = p.append(row, "button", {{"type", "button"}}, label);
        p.on(btn, PageEvent::click, [label](PageModel& page, const EventContext&) {
          page.state().emplace("clicked", label);
        });
      }
    });
    open_page(b, url);
    const auto& page = b.active_page();
    auto id = page.find_first([&](const Node& n) { return has_text(n, "button", target_); });
    auto [x, y] = page.node(*id).box.center();
    oracle_ = {fmt::format("mouse_click({}, {})", x, y)};
    return {ContentPart::text(fmt::format("Click on the \"{}\" button.", target_))};
  }

  Validation validate(const SimBrowser& b, const std::vector<ChatMessage>& chat) const override {
    if (auto got = tab_state(b, "clicked")) return check(true, *got == target_);
    if (gave_up(chat)) return {0, true, {}};
    return {};
  }

 private:
  std::string target_;
};

class ClickLink : public SynthTask {
 public:
  Goal setup(SimBrowser& b, std::uint64_t seed) override {
    SeededStream rng("synth.click-link", seed);
    auto words = pick_distinct(rng, kWords, static_cast<std::size_t>(rng.between(3, 6)));
    const std::string target = rng.pick(words);
    target_url_ = kBase + "click-link/" + target;
    const std::string url = kBase + "click-link";
    b.register_page(url, [words](PageModel& p, std::uint64_t) {
      page_heading(p, "Links");
      NodeId list = p.append(p.root(), "ul");
      for (const auto& w : words) {
        NodeId li = p.append(list, "li");
        p.append(li, "a", {{"href", kBase + "click-link/" + w}}, w);
      }
    });
    for (const auto& w : words) {
      b.register_page(kBase + "click-link/" + w,
                      [w](PageModel& p, std::uint64_t) { page_heading(p, "You opened " + w); });
    }
    open_page(b, url);
    oracle_ = {"click(" +
               quote_arg(bid_of(b.active_page(),
                                [&](const Node& n) { return has_text(n, "a", target); })) +
               ")"};
    return {ContentPart::text(fmt::format("Follow the link \"{}\".", target))};
  }

  Validation validate(const SimBrowser& b, const std::vector<ChatMessage>& chat) const override {
    const auto& url = b.active_page().url();
    if (url.rfind(kBase + "click-link/", 0) == 0) return check(true, url == target_url_);
    if (gave_up(chat)) return {0, true, {}};
    return {};
  }

 private:
  std::string target_url_;
};

class ChooseList : public SynthTask {
 public:
  Goal setup(SimBrowser& b, std::uint64_t seed) override {
    SeededStream rng("synth.choose-list", seed);
    auto options = pick_distinct(rng, kWords, static_cast<std::size_t>(rng.between(4, 8)));
    target_ = rng.pick(options);
    const std::string url = kBase + "choose-list";
    b.register_page(url, [options](PageModel& p, std::uint64_t) {
      page_heading(p, "Choose from the list");
      NodeId form = p.append(p.root(), "form");
      NodeId row = p.append(form, "div");
      p.append(row, "label", {{"for", "choice"}}, "Options");
      NodeId select = p.append(row, "select", {{"id", "choice"}, {"name", "choice"}});
      for (const auto& o : options) p.append(select, "option", {{"value", o}}, o);
      p.append(form, "button", {{"type", "submit"}}, "Submit");
      p.on(form, PageEvent::submit, [select, first = options.front()](PageModel& page,
                                                                      const EventContext&) {
        auto v = page.attr(select, "value");
        page.state()["submitted"] = v ? *v : first;
      });
    });
    open_page(b, url);
    const auto& page = b.active_page();
    oracle_ = {
        fmt::format("select_option({}, {})",
                    quote_arg(bid_of(page, [](const Node& n) { return has_id(n, "choice"); })),
                    quote_arg(target_)),
        "click(" +
            quote_arg(bid_of(page, [](const Node& n) { return has_text(n, "button", "Submit"); })) +
            ")"};
    return {ContentPart::text(fmt::format("Select {} from the list and click Submit.", target_))};
  }

  Validation validate(const SimBrowser& b, const std::vector<ChatMessage>& chat) const override {
    return on_submit(b, chat, target_);
  }

 private:
  std::string target_;
};

// Shared by enter-text and enter-date: fill one field, then submit.
class FillAndSubmit : public SynthTask {
 protected:
  Goal open_form(SimBrowser& b, const std::string& name, const std::string& label,
                 const std::string& goal) {
    const std::string url = kBase + name;
    b.register_page(url, [label, name](PageModel& p, std::uint64_t) {
      page_heading(p, name);
      text_form(p, label);
    });
    open_page(b, url);
    const auto& page = b.active_page();
    oracle_ = {fmt::format("fill({}, {})",
                           quote_arg(bid_of(page, [](const Node& n) { return has_id(n, "field"); })),
                           quote_arg(expected_)),
               "click(" + quote_arg(bid_of(page, [](const Node& n) {
                 return has_text(n, "button", "Submit");
               })) + ")"};
    return {ContentPart::text(goal)};
  }

  Validation validate(const SimBrowser& b, const std::vector<ChatMessage>& chat) const override {
    return on_submit(b, chat, expected_);
  }

  std::string expected_;
};

class EnterText : public FillAndSubmit {
 public:
  Goal setup(SimBrowser& b, std::uint64_t seed) override {
    SeededStream rng("synth.enter-text", seed);
    auto words = pick_distinct(rng, kWords, 2);
    expected_ = words[0] + " " + words[1];
    return open_form(b, "enter-text", "Text",
                     fmt::format("Enter \"{}\" into the text field and click Submit.", expected_));
  }
};

class EnterDate : public FillAndSubmit {
 public:
  Goal setup(SimBrowser& b, std::uint64_t seed) override {
    SeededStream rng("synth.enter-date", seed);
    const auto month = rng.between(1, 12);
    const auto day = rng.between(1, 28);
    const auto year = rng.between(1990, 2030);
    expected_ = fmt::format("{:02}/{:02}/{}", month, day, year);
    return open_form(b, "enter-date", "Date (mm/dd/yyyy)",
                     fmt::format("Enter the date {} into the date field and click Submit.",
                                 expected_));
  }
};

class NumberCheckboxes : public SynthTask {
 public:
  Goal setup(SimBrowser& b, std::uint64_t seed) override {
    SeededStream rng("synth.number-checkboxes", seed);
    const auto n = static_cast<std::size_t>(rng.between(4, 7));
    auto labels = pick_distinct(rng, kWords, n);
    const auto k = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(n) - 1));
    std::vector<std::string> wanted;
    for (auto i : rng.sample_indices(n, k)) wanted.push_back(labels[i]);
    const std::string url = kBase + "number-checkboxes";
    b.register_page(url, [labels](PageModel& p, std::uint64_t) {
      page_heading(p, "Checkboxes");
      NodeId form = p.append(p.root(), "form");
      std::vector<std::pair<NodeId, std::string>> boxes;
      for (const auto& l : labels) {
        NodeId row = p.append(form, "div");
        NodeId label = p.append(row, "label");
        boxes.emplace_back(p.append(label, "input", {{"type", "checkbox"}, {"name", l}}), l);
        p.append_text(label, l);
      }
      p.append(form, "button", {{"type", "submit"}}, "Submit");
      p.on(form, PageEvent::submit, [boxes](PageModel& page, const EventContext&) {
        std::vector<std::string> checked;
        for (const auto& [id, name] : boxes) {
          if (page.node(id).has_attr("checked")) checked.push_back(name);
        }
        std::sort(checked.begin(), checked.end());
        page.state()["submitted"] = fmt::format("{}", fmt::join(checked, ","));
      });
    });
    open_page(b, url);
    const auto& page = b.active_page();
    oracle_.clear();
    for (const auto& w : wanted) {
      oracle_.push_back("click(" + quote_arg(bid_of(page, [&](const Node& nd) {
                          const auto* name = nd.attr("name");
                          return nd.tag == "input" && name && *name == w;
                        })) + ")");
    }
    oracle_.push_back("click(" + quote_arg(bid_of(page, [](const Node& nd) {
                        return has_text(nd, "button", "Submit");
                      })) + ")");
    std::string listed = wanted.size() == 1
                             ? wanted[0]
                             : fmt::format("{} and {}",
                                           fmt::join(wanted.begin(), wanted.end() - 1, ", "),
                                           wanted.back());
    std::sort(wanted.begin(), wanted.end());
    expected_ = fmt::format("{}", fmt::join(wanted, ","));
    return {ContentPart::text(
        fmt::format("Check exactly these boxes: {}. Leave the others unchecked, then click "
                    "Submit.",
                    listed))};
  }

  Validation validate(const SimBrowser& b, const std::vector<ChatMessage>& chat) const override {
    return on_submit(b, chat, expected_);
  }

 private:
  std::string expected_;
};

class LoginForm : public SynthTask {
 public:
  Goal setup(SimBrowser& b, std::uint64_t seed) override {
    SeededStream rng("synth.login-form", seed);
    user_ = rng.pick(kUsers);
    password_ = rng.pick(kWords) + std::to_string(rng.between(10, 99));
    const std::string url = kBase + "login-form";
    std::weak_ptr<FixtureStore> store = b.fixtures();
    b.register_page(url, [store](PageModel& p, std::uint64_t) {
      page_heading(p, "Sign in");
      NodeId form = p.append(p.root(), "form");
      NodeId r1 = p.append(form, "div");
      p.append(r1, "label", {{"for", "username"}}, "Username");
      NodeId user = p.append(r1, "input", {{"id", "username"}, {"type", "text"}});
      NodeId r2 = p.append(form, "div");
      p.append(r2, "label", {{"for", "password"}}, "Password");
      NodeId pass = p.append(r2, "input", {{"id", "password"}, {"type", "password"}});
      p.append(form, "button", {{"type", "submit"}}, "Login");
      p.on(form, PageEvent::submit, [user, pass, store](PageModel& page, const EventContext&) {
        const std::string u = value_of(page, user);
        page.state()["submitted"] = u + "\n" + value_of(page, pass);
        if (auto s = store.lock()) s->set("session", u);
      });
    });
    open_page(b, url);
    const auto& page = b.active_page();
    oracle_ = {
        fmt::format("fill({}, {})",
                    quote_arg(bid_of(page, [](const Node& n) { return has_id(n, "username"); })),
                    quote_arg(user_)),
        fmt::format("fill({}, {})",
                    quote_arg(bid_of(page, [](const Node& n) { return has_id(n, "password"); })),
                    quote_arg(password_)),
        "click(" +
            quote_arg(bid_of(page, [](const Node& n) { return has_text(n, "button", "Login"); })) +
            ")"};
    return {ContentPart::text(fmt::format(
        "Log in with the username \"{}\" and the password \"{}\".", user_, password_))};
  }

  Validation validate(const SimBrowser& b, const std::vector<ChatMessage>& chat) const override {
    return on_submit(b, chat, user_ + "\n" + password_);
  }

 private:
  std::string user_;
  std::string password_;
};

class MultiTabCopy : public SynthTask {
 public:
  Goal setup(SimBrowser& b, std::uint64_t seed) override {
    SeededStream rng("synth.multi-tab-copy", seed);
    code_.clear();
    for (int i = 0; i < 3; ++i) code_ += static_cast<char>('A' + rng.below(26));
    code_ += std::to_string(rng.between(100, 999));
    const std::string source = kBase + "multi-tab-copy/source";
    const std::string form = kBase + "multi-tab-copy/form";
    b.register_page(source, [code = code_](PageModel& p, std::uint64_t) {
      page_heading(p, "Reference");
      NodeId para = p.append(p.root(), "p", {}, "The code is ");
      p.append(para, "span", {{"class", "code"}}, code);
    });
    b.register_page(form, [](PageModel& p, std::uint64_t) {
      page_heading(p, "Enter code");
      text_form(p, "Code");
    });
    open_page(b, source);
    open_in_new_tab(b, form);
    const auto& page = b.active_page();
    oracle_ = {"tab_focus(0)", "tab_focus(1)",
               fmt::format("fill({}, {})",
                           quote_arg(bid_of(page, [](const Node& n) { return has_id(n, "field"); })),
                           quote_arg(code_)),
               "click(" + quote_arg(bid_of(page, [](const Node& n) {
                 return has_text(n, "button", "Submit");
               })) + ")"};
    return {ContentPart::text(
        "Copy the code shown in the first tab into the code field of the second tab, then "
        "click Submit.")};
  }

  Validation validate(const SimBrowser& b, const std::vector<ChatMessage>& chat) const override {
    return on_submit(b, chat, code_);
  }

 private:
  std::string code_;
};

class SearchAndAnswer : public SynthTask {
 public:
  Goal setup(SimBrowser& b, std::uint64_t seed) override {
    SeededStream rng("synth.search-and-answer", seed);
    auto cats = pick_distinct(rng, kCategories, 3);
    auto items = pick_distinct(rng, kWords, 9);
    const std::string home = kBase + "search-and-answer";
    std::map<std::string, std::vector<std::string>> by_cat;
    std::map<std::string, std::string> price;
    for (std::size_t i = 0; i < items.size(); ++i) {
      by_cat[cats[i % cats.size()]].push_back(items[i]);
      price[items[i]] = fmt::format("${}.{:02}", rng.between(2, 99), rng.between(0, 99));
    }
    const std::size_t t = rng.below(items.size());
    const std::string item = items[t];
    const std::string cat = cats[t % cats.size()];
    answer_ = price[item];
    auto cat_url = [home](const std::string& c) { return home + "/" + c; };
    auto item_url = [home](const std::string& i) { return home + "/item/" + i; };
    b.register_page(home, [cats, cat_url](PageModel& p, std::uint64_t) {
      page_heading(p, "Catalog");
      NodeId list = p.append(p.root(), "ul");
      for (const auto& c : cats) p.append(p.append(list, "li"), "a", {{"href", cat_url(c)}}, c);
    });
    PageBuilder target_cat_builder;
    for (const auto& [c, list_items] : by_cat) {
      PageBuilder builder = [c = c, list_items = list_items, item_url](PageModel& p,
                                                                       std::uint64_t) {
        page_heading(p, c);
        NodeId list = p.append(p.root(), "ul");
        for (const auto& i : list_items) {
          p.append(p.append(list, "li"), "a", {{"href", item_url(i)}}, i);
        }
      };
      if (c == cat) target_cat_builder = builder;
      b.register_page(cat_url(c), std::move(builder));
    }
    for (const auto& i : items) {
      b.register_page(item_url(i), [i, pr = price[i]](PageModel& p, std::uint64_t) {
        page_heading(p, i);
        p.append(p.root(), "p", {}, "Price: " + pr);
      });
    }
    open_page(b, home);
    const PageModel cat_page = preview_page(cat_url(cat), target_cat_builder, b.seed());
    oracle_ = {
        "click(" +
            quote_arg(bid_of(b.active_page(), [&](const Node& n) { return has_text(n, "a", cat); })) +
            ")",
        "click(" + quote_arg(bid_of(cat_page, [&](const Node& n) { return has_text(n, "a", item); })) +
            ")",
        "send_msg_to_user(" + quote_arg(answer_) + ")"};
    return {ContentPart::text(fmt::format(
        "What is the price of the {} item? Browse the catalog and answer in the chat.", item))};
  }

  // Stops after the first answer.
  Validation validate(const SimBrowser&, const std::vector<ChatMessage>& chat) const override {
    const auto* m = last_agent_message(chat);
    if (!m) return {};
    const bool right = m->role == ChatRole::assistant && m->text().find(answer_) != std::string::npos;
    return {right ? 1.0 : 0.0, true, right ? std::optional<std::string>("That's correct")
                                           : std::nullopt};
  }

 private:
  std::string answer_;
};

class InfeasibleRequest : public SynthTask {
 public:
  Goal setup(SimBrowser& b, std::uint64_t seed) override {
    SeededStream rng("synth.infeasible-request", seed);
    const std::string phone = fmt::format("555-{:04}", rng.between(0, 9999));
    const std::string url = kBase + "infeasible-request";
    b.register_page(url, [](PageModel& p, std::uint64_t) {
      page_heading(p, "Contact details");
      NodeId form = p.append(p.root(), "form");
      NodeId r1 = p.append(form, "div");
      p.append(r1, "label", {{"for", "name"}}, "Name");
      p.append(r1, "input", {{"id", "name"}, {"type", "text"}});
      NodeId r2 = p.append(form, "div");
      p.append(r2, "label", {{"for", "email"}}, "Email");
      p.append(r2, "input", {{"id", "email"}, {"type", "email"}});
      p.append(form, "button", {{"type", "submit"}}, "Submit");
      p.on(form, PageEvent::submit, [](PageModel& page, const EventContext&) {
        page.state()["submitted"] = "1";
      });
    });
    open_page(b, url);
    oracle_ = {"report_infeasible(\"There is no phone number field on this form.\")"};
    return {ContentPart::text(fmt::format(
        "Enter the phone number {} into the phone number field and click Submit.", phone))};
  }

  Validation validate(const SimBrowser& b, const std::vector<ChatMessage>& chat) const override {
    const auto* m = last_agent_message(chat);
    if (m) return check(true, m->role == ChatRole::infeasible);
    if (tab_state(b, "submitted")) return {0, true, {}};
    return {};
  }
};

struct Template {
  std::string name;
  TaskFactory factory;
  std::string category;
  std::string level;
  Split split;
};

const std::vector<Template>& templates() {
  static const std::vector<Template> kTemplates = {
      {"click-button", [] { return std::make_unique<ClickButton>(); }, "click", "easy",
       Split::train},
      {"click-link", [] { return std::make_unique<ClickLink>(); }, "click", "easy", Split::test},
      {"choose-list", [] { return std::make_unique<ChooseList>(); }, "form", "easy", Split::test},
      {"enter-text", [] { return std::make_unique<EnterText>(); }, "form", "easy", Split::train},
      {"enter-date", [] { return std::make_unique<EnterDate>(); }, "form", "easy", Split::test},
      {"number-checkboxes", [] { return std::make_unique<NumberCheckboxes>(); }, "form", "medium",
       Split::test},
      {"login-form", [] { return std::make_unique<LoginForm>(); }, "form", "medium",
       Split::train},
      {"multi-tab-copy", [] { return std::make_unique<MultiTabCopy>(); }, "tabs", "medium",
       Split::test},
      {"search-and-answer", [] { return std::make_unique<SearchAndAnswer>(); }, "navigation",
       "hard", Split::test},
      {"infeasible-request", [] { return std::make_unique<InfeasibleRequest>(); }, "chat",
       "medium", Split::test},
  };
  return kTemplates;
}

TaskSpec spec_for(const Template& t) {
  TaskSpec spec;
  spec.id = "synth." + t.name;
  spec.template_name = t.name;
  spec.seed_diversity = SeedDiversity::high;
  spec.default_max_steps = 10;
  spec.metadata = {{"category", t.category},
                   {"level", t.level},
                   {"split", std::string(to_string(t.split))}};
  return spec;
}

}  // namespace

const std::vector<std::string>& synthetic_task_ids() {
  static const std::vector<std::string> kIds = [] {
    std::vector<std::string> ids;
    for (const auto& t : templates()) ids.push_back("synth." + t.name);
    return ids;
  }();
  return kIds;
}

void register_synthetic_tasks(TaskRegistry& registry) {
  for (const auto& t : templates()) registry.register_task("synth." + t.name, t.factory, spec_for(t));
}

Benchmark synthetic_benchmark() {
  Benchmark b;
  b.name = "synthetic";
  b.version = "1.0";
  b.suggested_seeds_per_task = 5;
  b.suggested_max_steps = 10;
  for (const auto& t : templates()) {
    b.tasks.push_back(spec_for(t));
    b.split_assignment[b.tasks.back().id] = t.split;
  }
  return b;
}

}  // namespace wgym
