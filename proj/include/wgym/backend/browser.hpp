#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "wgym/backend/commands.hpp"
#include "wgym/backend/fixtures.hpp"
#include "wgym/backend/page.hpp"

namespace wgym {

struct Tab {
  PageModel page;
  std::vector<std::string> history;
  std::size_t history_index = 0;

  bool operator==(const Tab&) const = default;
};

struct TabSet {
  std::vector<Tab> tabs;
  std::size_t active_index = 0;

  Tab& active() { return tabs.at(active_index); }
  const Tab& active() const { return tabs.at(active_index); }

  bool operator==(const TabSet&) const = default;
};

// Builds the content of a freshly loaded page. Must be deterministic in
// (url, seed).
using PageBuilder = std::function<void(PageModel& page, std::uint64_t seed)>;

// What the environment needs from a browser. A remote adapter would mirror
// the remote page into PageModel form and forward commands as JSON.
class BrowserBackend {
 public:
  virtual ~BrowserBackend() = default;

  virtual std::optional<CommandError> execute(const BackendCommand& command, int timeout_ms) = 0;
  virtual const TabSet& tabs() const = 0;
  virtual PageModel& active_page() = 0;
  virtual const PageModel& active_page() const = 0;
};

class SimBrowser : public BrowserBackend {
 public:
  using FaultHook = std::function<void(const BackendCommand&)>;

  explicit SimBrowser(std::uint64_t seed = 0, Viewport viewport = {});

  std::uint64_t seed() const { return seed_; }

  // Throws RegistrationError when the url is already registered.
  void register_page(std::string url, PageBuilder builder);
  bool has_page(const std::string& url) const { return registry_.count(url) > 0; }
  void clear_pages() { registry_.clear(); }

  void set_fixtures(std::shared_ptr<FixtureStore> fixtures) { fixtures_ = std::move(fixtures); }
  const std::shared_ptr<FixtureStore>& fixtures() const { return fixtures_; }

  // Called before every command; may throw BackendFailure to simulate an
  // infrastructure fault.
  void set_fault_hook(FaultHook hook) { fault_hook_ = std::move(hook); }

  std::optional<CommandError> execute(const BackendCommand& command, int timeout_ms) override;

  // Resolves a bid on the active page.
  std::variant<NodeId, CommandError> locate(std::string_view bid) const;

  const TabSet& tabs() const override { return tabs_; }
  PageModel& active_page() override { return tabs_.active().page; }
  const PageModel& active_page() const override { return tabs_.active().page; }

  // Virtual time consumed by waits and actionability timeouts.
  double clock_ms() const { return clock_ms_; }

 private:
  std::optional<CommandError> navigate(Tab& tab, const std::string& url, bool push);
  PageModel materialize(const std::string& url) const;
  std::optional<CommandError> settle();

  std::uint64_t seed_;
  Viewport viewport_;
  TabSet tabs_;
  std::map<std::string, PageBuilder> registry_;
  std::shared_ptr<FixtureStore> fixtures_;
  FaultHook fault_hook_;
  double clock_ms_ = 0;
  std::set<std::string> held_keys_;
  std::optional<NodeId> mouse_down_node_;

  friend class CommandRunner;
};

}  // namespace wgym
