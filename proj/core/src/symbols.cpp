#include "tabulog/symbols.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace tabulog {
namespace {

struct symbol_registry {
  std::shared_mutex mu;
  std::deque<std::string> names;
  std::unordered_map<std::string_view, symbol_id> ids;
};

symbol_registry& registry() {
  static symbol_registry r;
  return r;
}

}  // namespace

symbol_id intern(std::string_view name) {
  auto& r = registry();
  {
    std::shared_lock lock(r.mu);
    auto it = r.ids.find(name);
    if (it != r.ids.end()) return it->second;
  }
  std::unique_lock lock(r.mu);
  auto it = r.ids.find(name);
  if (it != r.ids.end()) return it->second;
  auto id = static_cast<symbol_id>(r.names.size());
  r.names.emplace_back(name);
  r.ids.emplace(r.names.back(), id);
  return id;
}

const std::string& symbol_name(symbol_id id) {
  auto& r = registry();
  std::shared_lock lock(r.mu);
  return r.names[id];
}

std::string pred_indicator(pred_key k) {
  return symbol_name(pred_key_name(k)) + "/" +
         std::to_string(pred_key_arity(k));
}

}  // namespace tabulog
