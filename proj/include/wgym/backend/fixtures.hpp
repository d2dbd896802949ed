#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>

namespace wgym {

// Key-value data shared by every page of a benchmark backend, standing in
// for the server-side database of a hosted web application. Keys of the form
// "banner:<url>" add a notice to the page at that url when it is built.
class FixtureStore {
 public:
  std::optional<std::string> get(const std::string& key) const;
  void set(std::string key, std::string value);
  void erase(const std::string& key);
  std::map<std::string, std::string> snapshot() const;

  // Drops all writes and restores the seeded entries.
  void reset();
  // Loads a flat JSON object of string values as the seeded entries and
  // resets. Throws ConfigError when the file is missing or malformed.
  void load_file(const std::filesystem::path& path);
  // Seeded entries become the empty set.
  void clear_seed();

  bool operator==(const FixtureStore& other) const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::string> data_;
  std::map<std::string, std::string> seeded_;
};

}  // namespace wgym
