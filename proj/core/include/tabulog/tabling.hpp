#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <vector>

#include "tabulog/engine.hpp"
#include "tabulog/trie.hpp"
#include "tabulog/worklist.hpp"

namespace tabulog {

enum class table_status : std::uint8_t { fresh, active, complete };

// A suspended consumer of a table's answers: when the source call produces
// an answer, the continuation runs with the source wrapper unified against
// it, and whatever it derives belongs to the target call. The three parts
// are snapshot copies sharing one variable renaming, taken when the
// dependency is stored; each resumption copies them afresh.
struct dependency {
  term source_wrapper;
  std::vector<term> cont_goals;
  term target_wrapper;
  table* target = nullptr;
};

// State of one call variant. Answers live in a trie keyed by their canonical
// form, so duplicates are detected modulo renaming; the worklist pairs new
// answers with stored dependencies. A complete table holds no dependencies.
class table {
 public:
  explicit table(variant_key key) : key_(std::move(key)) {}

  const variant_key& key() const { return key_; }
  table_status status() const { return status_; }

  std::size_t answer_count() const { return answers_.size(); }
  variant_key answer_key(std::size_t i) const {
    return answers_.key_at(answers_.leaf(i));
  }
  std::vector<variant_key> answer_keys() const { return answers_.enumerate(); }

  std::size_t dependency_count() const { return deps_.size(); }

 private:
  friend class tabler;

  void to_active() {
    assert(status_ == table_status::fresh);
    status_ = table_status::active;
  }
  void to_complete() {
    assert(status_ == table_status::active);
    status_ = table_status::complete;
    deps_.clear();
    wl_.clear();
  }
  // Recovery reset after an error escaped the component: everything the
  // aborted evaluation stored is dropped, so a later call recomputes.
  void reset_to_fresh() {
    status_ = table_status::fresh;
    answers_.clear();
    deps_.clear();
    wl_.clear();
  }

  variant_key key_;
  table_status status_ = table_status::fresh;
  term_trie<std::uint32_t> answers_;            // payload: insertion ordinal
  std::deque<dependency> deps_;                 // stable under growth
  local_worklist<term, std::uint32_t> wl_;      // answers, indices into deps_
};

struct tabling_stats {
  std::uint64_t tables_created = 0;
  std::uint64_t answers_stored = 0;
  std::uint64_t dependencies_stored = 0;
  std::uint64_t worker_invocations = 0;
  std::uint64_t suspensions = 0;
  std::uint64_t resumptions = 0;
};

// Call-variant tabling over a machine. The first tabled call with no
// evaluation in progress leads its strongly connected component: it
// activates the call, then runs the completion fixpoint over the global
// worklist; calls reached during that evaluation suspend into dependencies
// instead of recursing. Tables persist across queries until abolished.
class tabler : public tabled_call_handler {
 public:
  explicit tabler(machine& m) : m_(m), worker_sym_(intern("$worker")) {
    m_.set_tabling(this);
  }
  tabler(const tabler&) = delete;
  tabler& operator=(const tabler&) = delete;

  action on_tabled_call(term wrapper) override;
  std::size_t answer_count(const table* t) const override {
    return t->answer_count();
  }
  term answer_instance(table* t, std::size_t i) override;
  void abolish_all() override;

  const tabling_stats& stats() const { return stats_; }

  std::vector<const table*> tables() const;
  const table* find_table(const variant_key& k) const;
  bool component_active() const { return component_active_; }

 private:
  table* table_for(term wrapper);
  void run_leader(term wrapper, table* t);
  void activate(term wrapper, table* t);
  void drive(term wrapper, std::span<const term> goals, table* t);
  void completion();
  void completion_step(table* t);
  void store_answer(table* t, term wrapper);
  void store_dependency(table* src, dependency d);
  void schedule(table* t);

  machine& m_;
  term_trie<table*> calls_;
  std::vector<std::unique_ptr<table>> tables_;

  bool component_active_ = false;
  std::vector<table*> component_;
  global_worklist<table*> gwl_;

  tabling_stats stats_;
  symbol_id worker_sym_;
};

}  // namespace tabulog
