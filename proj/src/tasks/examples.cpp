#include "wgym/tasks/examples.hpp"

#include <fmt/format.h>

namespace wgym {

namespace {

const std::string kSearchUrl = "http://google.com";
const std::string kResultsUrl = "http://google.com/search";

// A search box whose suggestion list covers the search button once the user
// types, as on the real page.
void build_search_page(PageModel& p, std::uint64_t) {
  p.set_title("Google");
  NodeId form = p.append(p.root(), "form", {{"action", "/search"}, {"role", "search"}});
  NodeId q = p.append(form, "textarea", {{"name", "q"}, {"title", "Search"}});
  NodeId btn = p.append(form, "input",
                        {{"name", "btnK"},
                         {"tabindex", "0"},
                         {"role", "button"},
                         {"type", "submit"},
                         {"class", "gNO89b"},
                         {"value", "Google Search"}});
  p.set_bid(btn, "241");
  p.on(q, PageEvent::input, [btn](PageModel& page, const EventContext& ev) {
    const bool exists = page.state().count("suggestions") > 0;
    if (ev.detail.empty() || exists) return;
    const Box b = page.node(btn).box;
    NodeId list = page.append(page.root(), "div", {{"class", "mus_il"}, {"role", "listbox"}});
    page.append(list, "div", {{"role", "option"}}, ev.detail + " birthday");
    page.set_box(list, Box{0, b.top - 10, 600, b.height + 60});
    page.set_intercepts_pointer(list);
    page.state()["suggestions"] = "1";
  });
  p.on(form, PageEvent::submit, [](PageModel& page, const EventContext&) {
    page.request_navigation(kResultsUrl);
  });
}

void build_results_page(PageModel& p, std::uint64_t) {
  p.set_title("einstein - Google Search");
  p.append(p.root(), "h3", {}, "Albert Einstein - Wikipedia");
  p.append(p.root(), "p", {}, "Albert Einstein (born 14 March 1879 in Ulm) was a physicist.");
}

class EinsteinTask : public Task {
 public:
  Goal setup(SimBrowser& b, std::uint64_t) override {
    b.register_page(kSearchUrl, build_search_page);
    b.register_page(kResultsUrl, build_results_page);
    open_page(b, kSearchUrl);
    return {ContentPart::text("Which year was einstein born?")};
  }

  // Stops after the first answer.
  Validation validate(const SimBrowser&, const std::vector<ChatMessage>& chat) const override {
    if (chat.empty() || chat.back().role != ChatRole::assistant) return {0, false, {}};
    const bool right = chat.back().text().find("1879") != std::string::npos;
    return {right ? 1.0 : 0.0, true, right ? "That's correct" : ""};
  }

  std::vector<std::string> oracle_actions() const override {
    return {"send_msg_to_user(\"1879\")"};
  }
};

struct Product {
  std::string name;
  std::string image;
};

const std::vector<Product> kShoes = {{"Red sneaker", "image://shoes/red-sneaker"},
                                     {"Brown boot", "image://shoes/brown-boot"},
                                     {"Blue sandal", "image://shoes/blue-sandal"}};

class ImageGoalTask : public Task {
 public:
  Goal setup(SimBrowser& b, std::uint64_t seed) override {
    target_ = seed % kShoes.size();
    const std::string url = "local://shop/shoes";
    b.register_page(url, [](PageModel& p, std::uint64_t) {
      p.set_title("Shoes");
      p.append(p.root(), "h1", {}, "Shoes");
      for (const auto& s : kShoes) {
        NodeId item = p.append(p.root(), "div", {{"class", "product"}});
        p.append(item, "img", {{"alt", s.name}, {"src", s.image}});
        NodeId btn = p.append(item, "button", {{"type", "button"}}, "Add " + s.name);
        p.on(btn, PageEvent::click, [name = s.name](PageModel& page, const EventContext&) {
          page.state().emplace("cart", name);
        });
      }
    });
    open_page(b, url);
    oracle_ = "click(" + quote_arg(bid_of(b.active_page(), [&](const Node& n) {
                return n.tag == "button" && n.text == "Add " + kShoes[target_].name;
              })) + ")";
    return {ContentPart::text("Find a pair of shoes that look like this image and add them to "
                              "the cart."),
            ContentPart::image(kShoes[target_].image)};
  }

  Validation validate(const SimBrowser& b, const std::vector<ChatMessage>&) const override {
    const auto& st = b.active_page().state();
    auto it = st.find("cart");
    if (it == st.end()) return {};
    return {it->second == kShoes[target_].name ? 1.0 : 0.0, true, {}};
  }

  std::vector<std::string> oracle_actions() const override { return {oracle_}; }

 private:
  std::size_t target_ = 0;
  std::string oracle_;
};

class VoteTask : public Task {
 public:
  Goal setup(SimBrowser& b, std::uint64_t) override {
    b.register_page(kVotePageUrl, [](PageModel& p, std::uint64_t) { build_vote_page(p); });
    open_page(b, kVotePageUrl);
    return {ContentPart::text("Upvote the question.")};
  }

  Validation validate(const SimBrowser& b, const std::vector<ChatMessage>&) const override {
    const auto& st = b.active_page().state();
    auto it = st.find("vote");
    if (it == st.end()) return {};
    return {it->second == "1" ? 1.0 : 0.0, true, {}};
  }

  std::vector<std::string> oracle_actions() const override { return {"click(\"169\")"}; }
};

}  // namespace

void build_vote_page(PageModel& p) {
  p.set_title("Question 18838");
  NodeId form = p.append(p.root(), "form", {{"action", "/sv/18838"}, {"class", "vote"}});
  NodeId up = p.append(form, "button", {{"title", "Upvote"}, {"type", "submit"}, {"value", "1"}});
  NodeId score = p.append(form, "span",
                          {{"class", "vote__net-score"}, {"data-vote-target", "score"}}, "17705");
  NodeId down =
      p.append(form, "button", {{"title", "Downvote"}, {"type", "submit"}, {"value", "-1"}});
  p.set_bid(form, "167");
  p.set_bid(up, "169");
  p.set_bid(score, "174");
  p.set_bid(down, "179");
  for (NodeId btn : {up, down}) {
    p.on(btn, PageEvent::click, [btn](PageModel& page, const EventContext&) {
      page.state()["vote"] = *page.attr(btn, "value");
    });
  }
}

void register_example_tasks(TaskRegistry& registry) {
  TaskSpec spec;
  spec.default_max_steps = 10;
  spec.metadata = {{"category", "example"}};
  registry.register_task("example.einstein", [] { return std::make_unique<EinsteinTask>(); },
                         spec);
  spec.seed_diversity = SeedDiversity::medium;
  registry.register_task("example.image-goal", [] { return std::make_unique<ImageGoalTask>(); },
                         spec);
  spec.seed_diversity = SeedDiversity::none;
  registry.register_task("example.vote", [] { return std::make_unique<VoteTask>(); }, spec);
}

}  // namespace wgym
