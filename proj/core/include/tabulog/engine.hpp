#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <span>
#include <vector>

#include "tabulog/errors.hpp"
#include "tabulog/program.hpp"
#include "tabulog/term.hpp"

namespace tabulog {

class machine;
class table;

// The rest of a delimited computation, captured at a shift as a plain goal
// list. Copyable and resumable any number of times; callers that need
// independent instantiations copy the goals (with their wrappers) first.
struct suspension {
  std::vector<term> goals;
};

// One event pulled from a delimited run.
//
//   answer     - the run's goals succeeded; bindings are readable until the
//                next pull.
//   shifted    - a shift was performed: payload carries the shift argument
//                (for a tabled call: the call itself, with source set to its
//                table) and susp the captured remainder. The suspended
//                branch is failed on the next pull.
//   exhausted  - no alternatives remain; the machine is back in the state it
//                had when the run started. Terminal.
struct delim_outcome {
  enum class kind : std::uint8_t { answer, shifted, exhausted };
  kind k = kind::exhausted;
  term payload;
  table* source = nullptr;
  suspension susp;
};

// Decides what a tabled call does at dispatch. Implemented by the tabling
// layer; the machine only routes.
class tabled_call_handler {
 public:
  virtual ~tabled_call_handler() = default;

  struct action {
    enum class kind : std::uint8_t { enumerate, suspend };
    kind k;
    table* tbl;
  };

  // May run nested delimited computations on the machine before returning.
  virtual action on_tabled_call(term wrapper) = 0;
  virtual std::size_t answer_count(const table* t) const = 0;
  virtual term answer_instance(table* t, std::size_t i) = 0;
  virtual void abolish_all() = 0;
};

// Handle onto one delimited run. Runs nest strictly: only the innermost may
// be pulled, and handles close in reverse creation order. Destroying a
// handle unwinds whatever is left of its segment (choicepoints, trail,
// goals), so the machine is restored even on exception paths.
class delim_run {
 public:
  delim_run(delim_run&& o) noexcept
      : m_(o.m_), idx_(o.idx_), open_(o.open_), done_(o.done_) {
    o.open_ = false;
  }
  delim_run(const delim_run&) = delete;
  delim_run& operator=(const delim_run&) = delete;
  delim_run& operator=(delim_run&&) = delete;
  ~delim_run();

  delim_outcome next();

 private:
  friend class machine;
  delim_run(machine* m, std::size_t idx) : m_(m), idx_(idx), open_(true) {}
  machine* m_;
  std::size_t idx_;
  bool open_;
  bool done_ = false;  // exhausted runs release their engine frame eagerly
};

// SLD resolution machine with delimited runs. Goal stacks are persistent
// linked lists, so a choicepoint snapshots the remaining goals in O(1).
// Backtracking undoes the trail exactly to each choicepoint's mark and
// never crosses the base of an open run.
class machine {
 public:
  explicit machine(const program& p);
  machine(const machine&) = delete;
  machine& operator=(const machine&) = delete;

  term_store& store() { return store_; }
  const program& prog() const { return *prog_; }

  void set_tabling(tabled_call_handler* h) { tabling_ = h; }
  void set_output(std::ostream& os) { out_ = &os; }
  std::ostream& output() { return *out_; }

  // 0 means unlimited. Counts goal dispatches; exceeding throws
  // resource_error.
  void set_step_limit(std::uint64_t n) { step_limit_ = n; }

  // Starts a delimited run over the goals, innermost-first. Solving a query
  // is the same run started while the machine is idle.
  delim_run delimited(std::span<const term> goals);
  delim_run solve(std::span<const term> goals) { return delimited(goals); }
  delim_run resume(const suspension& s) { return delimited(s.goals); }

  std::uint64_t steps() const { return steps_; }
  // Dispatches performed inside nested (tabling-driven) runs.
  std::uint64_t worker_steps() const { return worker_steps_; }
  std::size_t run_depth() const { return runs_.size(); }

  // Arithmetic evaluation over binary + - * , unary -, and integers.
  bigint eval_arith(term t);

 private:
  friend class delim_run;

  struct goal_node {
    term g;
    const goal_node* next;
  };

  enum class cp_kind : std::uint8_t { clauses, answers };

  struct choicepoint {
    term call;
    const goal_node* rest;
    std::size_t trail;
    cp_kind kind;
    const pred_def* pred = nullptr;       // clauses
    std::vector<std::uint32_t> cand;      // clauses
    table* tbl = nullptr;                 // answers
    std::uint32_t next = 0;
  };

  enum class run_state : std::uint8_t { ready, at_answer, at_shift };

  struct run_frame {
    const goal_node* base;
    std::size_t cp_base;
    std::size_t trail_base;
    run_state state;
  };

  const goal_node* push_goal(term g, const goal_node* next);
  std::vector<term> collect_goals(const goal_node* from, const goal_node* base) const;

  delim_outcome run_next(std::size_t idx);
  void run_close(std::size_t idx);
  delim_outcome finish_exhausted(run_frame& r);

  bool backtrack(run_frame& r);
  bool advance(choicepoint& cp);
  void push_clause_cp(term call, const goal_node* rest);
  void push_answer_cp(term call, const goal_node* rest, table* tbl);

  const program* prog_;
  term_store store_;
  tabled_call_handler* tabling_ = nullptr;
  std::ostream* out_;

  std::deque<goal_node> goal_arena_;
  const goal_node* goals_ = nullptr;
  std::vector<choicepoint> cps_;
  // Deque: frames are referenced across nested run creation.
  std::deque<run_frame> runs_;

  std::uint64_t steps_ = 0;
  std::uint64_t worker_steps_ = 0;
  std::uint64_t step_limit_ = 0;

  pred_key worker_key_;
};

}  // namespace tabulog
