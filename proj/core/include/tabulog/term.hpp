#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cassert>
#include <cstdint>
#include <deque>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tabulog/symbols.hpp"

namespace tabulog {

using bigint = boost::multiprecision::cpp_int;

enum class term_kind : std::uint8_t { variable, atom, integer, compound };

class term_store;
struct term_node;

// Value handle onto a node owned by a term_store. Cheap to copy; identity of
// an unbound variable is the identity of its store cell.
class term {
 public:
  term() = default;

  explicit operator bool() const { return node_ != nullptr; }
  term_kind kind() const;
  symbol_id symbol() const;           // atom name or compound functor
  std::uint32_t var_id() const;
  const bigint& value() const;
  std::size_t arity() const;          // 0 for non-compounds
  term arg(std::size_t i) const;
  pred_key indicator() const;         // atoms have arity 0

  bool same_node(term other) const { return node_ == other.node_; }

 private:
  friend class term_store;
  explicit term(const term_node* n) : node_(n) {}
  const term_node* node_ = nullptr;
};

struct term_node {
  term_kind kind;
  symbol_id sym = 0;        // atom, compound
  std::uint32_t var = 0;    // variable cell id
  bigint num;               // integer
  std::vector<term> args;   // compound, size >= 1
};

inline term_kind term::kind() const { return node_->kind; }
inline symbol_id term::symbol() const { return node_->sym; }
inline std::uint32_t term::var_id() const { return node_->var; }
inline const bigint& term::value() const { return node_->num; }
inline std::size_t term::arity() const { return node_->args.size(); }
inline term term::arg(std::size_t i) const { return node_->args[i]; }
inline pred_key term::indicator() const {
  return make_pred_key(node_->sym, static_cast<std::uint32_t>(node_->args.size()));
}

// One element of a canonical preorder serialization. Variables are numbered
// by first occurrence, so two terms are variants exactly when their token
// sequences are equal.
struct token {
  enum class tkind : std::uint8_t { var, atom, number, functor };
  tkind k = tkind::var;
  symbol_id sym = 0;        // atom, functor
  std::uint32_t idx = 0;    // var: occurrence index; functor: arity
  bigint num;               // number

  static token make_var(std::uint32_t i) { return {tkind::var, 0, i, 0}; }
  static token make_atom(symbol_id s) { return {tkind::atom, s, 0, 0}; }
  static token make_number(bigint v) { return {tkind::number, 0, 0, std::move(v)}; }
  static token make_functor(symbol_id s, std::uint32_t arity) {
    return {tkind::functor, s, arity, 0};
  }

  friend bool operator==(const token& a, const token& b) {
    if (a.k != b.k || a.sym != b.sym || a.idx != b.idx) return false;
    return a.k != tkind::number || a.num == b.num;
  }
};

std::size_t hash_token(const token& t);

struct token_hash {
  std::size_t operator()(const token& t) const { return hash_token(t); }
};

struct variant_key {
  std::vector<token> tokens;
  friend bool operator==(const variant_key&, const variant_key&) = default;
};

struct variant_key_hash {
  std::size_t operator()(const variant_key& k) const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (const auto& t : k.tokens) h = (h ^ hash_token(t)) * 0x100000001b3ull;
    return h;
  }
};

// Owns term nodes, variable binding cells, and the trail. Single-threaded;
// one store per engine instance. Nodes live as long as the store, and
// variable cell ids are never reused.
class term_store {
 public:
  term_store() = default;
  term_store(const term_store&) = delete;
  term_store& operator=(const term_store&) = delete;

  term make_atom(symbol_id s);
  term make_atom(std::string_view name) { return make_atom(intern(name)); }
  term make_int(bigint v);
  term make_compound(symbol_id f, std::vector<term> args);
  term make_compound(std::string_view f, std::vector<term> args) {
    return make_compound(intern(f), std::move(args));
  }
  term fresh_var();

  std::size_t var_count() const { return bindings_.size(); }

  // Follows bindings until an unbound variable or a non-variable.
  term deref(term t) const;

  // Unifies without occurs-check, recording bindings on the trail. On
  // failure bindings made so far remain; the caller undoes via its mark.
  bool unify(term a, term b);

  std::size_t trail_mark() const { return trail_.size(); }
  void undo_to(std::size_t mark);

  // Copies terms with fresh variables, dereferencing on the way; shared
  // variables stay shared across every copy made through one copier.
  class copier {
   public:
    explicit copier(term_store& st) : st_(&st) {}
    term copy(term t);

   private:
    term_store* st_;
    std::unordered_map<std::uint32_t, term> map_;
  };

  term copy(term t) { return copier(*this).copy(t); }

  // Canonical preorder serialization; variables numbered by first occurrence.
  variant_key key_of(term t) const;
  void append_key(term t, std::vector<token>& out,
                  std::unordered_map<std::uint32_t, std::uint32_t>& var_index) const;

  // Rebuilds a term from tokens. varmap maps token var indices to variables,
  // growing with fresh ones on demand; reuse it to share variables across
  // several rebuilds.
  term rebuild(std::span<const token> tokens, std::vector<term>& varmap);
  term rebuild(const variant_key& k) {
    std::vector<term> varmap;
    return rebuild(k.tokens, varmap);
  }

 private:
  friend class copier;
  void bind(std::uint32_t var, term t);

  std::deque<term_node> nodes_;
  std::vector<term> bindings_;          // var id -> binding, invalid = unbound
  std::vector<std::uint32_t> trail_;
  std::unordered_map<symbol_id, term> atom_cache_;
};

struct write_options {
  bool quoted = true;            // quote atoms that need it to re-parse
  std::string var_prefix = "_G";
};

// Prints terms with operator notation. Variables are named by first
// appearance through one writer instance, so bindings printed together get
// consistent names.
class term_writer {
 public:
  explicit term_writer(const term_store& st, write_options opts = {})
      : st_(&st), opts_(std::move(opts)) {}

  void write(std::ostream& os, term t);
  std::string str(term t);

 private:
  const term_store* st_;
  write_options opts_;
  std::unordered_map<std::uint32_t, std::uint32_t> names_;
};

// One-shot convenience; each call numbers variables afresh.
std::string to_display(const term_store& st, term t);

// Quotes an atom name if needed for re-parsing.
std::string atom_text(symbol_id s, bool quoted);

}  // namespace tabulog
