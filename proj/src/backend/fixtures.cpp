#include "wgym/backend/fixtures.hpp"

#include <fstream>

#include <json.hpp>

#include "wgym/common/errors.hpp"

namespace wgym {

std::optional<std::string> FixtureStore::get(const std::string& key) const {
  std::lock_guard lock(mu_);
  auto it = data_.find(key);
  if (it == data_.end()) return std::nullopt;
  return it->second;
}

void FixtureStore::set(std::string key, std::string value) {
  std::lock_guard lock(mu_);
  data_[std::move(key)] = std::move(value);
}

void FixtureStore::erase(const std::string& key) {
  std::lock_guard lock(mu_);
  data_.erase(key);
}

std::map<std::string, std::string> FixtureStore::snapshot() const {
  std::lock_guard lock(mu_);
  return data_;
}

void FixtureStore::reset() {
  std::lock_guard lock(mu_);
  data_ = seeded_;
}

void FixtureStore::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("fixture file not found: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("fixture file " + path.string() + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ConfigError("fixture file " + path.string() + " must hold an object");
  std::map<std::string, std::string> seeded;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_string()) {
      throw ConfigError("fixture '" + it.key() + "' in " + path.string() + " is not a string");
    }
    seeded[it.key()] = it.value().get<std::string>();
  }
  std::lock_guard lock(mu_);
  seeded_ = std::move(seeded);
  data_ = seeded_;
}

void FixtureStore::clear_seed() {
  std::lock_guard lock(mu_);
  seeded_.clear();
}

bool FixtureStore::operator==(const FixtureStore& other) const {
  if (this == &other) return true;
  std::scoped_lock lock(mu_, other.mu_);
  return data_ == other.data_ && seeded_ == other.seeded_;
}

}  // namespace wgym
