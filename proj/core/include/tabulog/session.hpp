#pragma once

#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabulog/engine.hpp"
#include "tabulog/parser.hpp"
#include "tabulog/tabling.hpp"

namespace tabulog {

struct engine_stats {
  std::uint64_t tables = 0;
  std::uint64_t answers = 0;
  std::uint64_t dependencies = 0;
  std::uint64_t suspensions = 0;
  std::uint64_t resumptions = 0;
  std::uint64_t worker_invocations = 0;
  std::uint64_t steps = 0;
  std::uint64_t worker_steps = 0;
};

struct binding {
  std::string name;
  std::string value;
};

// One query answer, materialized as text bindings. Unbound variables are
// numbered afresh per solution, so equal solutions print identically.
struct solution {
  std::vector<binding> bindings;
  std::string to_string() const;  // "X = a, Y = b" or "true"
};

class session;

// Lazy answer enumeration for one query. Keep at most one stream per
// session in flight; it holds the machine's run until destroyed.
class solution_stream {
 public:
  solution_stream(solution_stream&&) noexcept = default;
  solution_stream(const solution_stream&) = delete;
  ~solution_stream() = default;

  bool next();
  const solution& current() const { return cur_; }

 private:
  friend class session;
  solution_stream(term_store& st, delim_run run, query q);

  term_store* st_;
  query q_;
  delim_run run_;
  solution cur_;
};

// Snapshot of one table, for inspection.
struct table_info {
  std::string pattern;
  table_status status;
  std::vector<std::string> answers;
  std::size_t pending_dependencies;
};

// Owns a program, a machine, and its tabling state; front door for clients.
class session {
 public:
  explicit session(program p, std::ostream& out = std::cout);

  // Replaces the rule base; all tables and engine state are discarded.
  void load(program p);

  solution_stream query(std::string_view text);
  // Drains a query; limit 0 means all answers.
  std::vector<solution> all(std::string_view text, std::size_t limit = 0);

  engine_stats stats() const;
  void abolish_all_tables();
  std::vector<table_info> table_snapshot();

  machine& engine() { return *m_; }
  tabler& tabling() { return *tab_; }

  void set_step_limit(std::uint64_t n) { m_->set_step_limit(n); }

 private:
  std::unique_ptr<program> prog_;
  std::ostream* out_;
  std::unique_ptr<machine> m_;
  std::unique_ptr<tabler> tab_;
};

}  // namespace tabulog
