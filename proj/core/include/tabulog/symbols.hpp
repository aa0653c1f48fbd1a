#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace tabulog {

// Interned identifier for an atom or functor name. Symbols are process-wide
// so parsed programs are plain values that any engine instance can run.
using symbol_id = std::uint32_t;

symbol_id intern(std::string_view name);
const std::string& symbol_name(symbol_id id);

// Predicate indicator name/arity packed into one key.
using pred_key = std::uint64_t;

constexpr pred_key make_pred_key(symbol_id name, std::uint32_t arity) {
  return (static_cast<pred_key>(name) << 32) | arity;
}
constexpr symbol_id pred_key_name(pred_key k) {
  return static_cast<symbol_id>(k >> 32);
}
constexpr std::uint32_t pred_key_arity(pred_key k) {
  return static_cast<std::uint32_t>(k & 0xffffffffu);
}

// "name/arity" for error messages.
std::string pred_indicator(pred_key k);

}  // namespace tabulog
