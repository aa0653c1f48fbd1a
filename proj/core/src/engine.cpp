#include "tabulog/engine.hpp"

#include <iostream>
#include <unordered_map>

namespace tabulog {
namespace {

enum class builtin : std::uint8_t {
  b_true,
  b_fail,
  b_unify,
  b_is,
  b_lt,
  b_le,
  b_gt,
  b_ge,
  b_aeq,
  b_ane,
  b_writeln,
  b_shift,
  b_abolish
};

const std::unordered_map<pred_key, builtin>& builtin_table() {
  static const auto table = [] {
    std::unordered_map<pred_key, builtin> t;
    t.emplace(make_pred_key(intern("true"), 0), builtin::b_true);
    t.emplace(make_pred_key(intern("fail"), 0), builtin::b_fail);
    t.emplace(make_pred_key(intern("="), 2), builtin::b_unify);
    t.emplace(make_pred_key(intern("is"), 2), builtin::b_is);
    t.emplace(make_pred_key(intern("<"), 2), builtin::b_lt);
    t.emplace(make_pred_key(intern("=<"), 2), builtin::b_le);
    t.emplace(make_pred_key(intern(">"), 2), builtin::b_gt);
    t.emplace(make_pred_key(intern(">="), 2), builtin::b_ge);
    t.emplace(make_pred_key(intern("=:="), 2), builtin::b_aeq);
    t.emplace(make_pred_key(intern("=\\="), 2), builtin::b_ane);
    t.emplace(make_pred_key(intern("writeln"), 1), builtin::b_writeln);
    t.emplace(make_pred_key(intern("shift"), 1), builtin::b_shift);
    t.emplace(make_pred_key(intern("abolish_all_tables"), 0),
              builtin::b_abolish);
    return t;
  }();
  return table;
}

}  // namespace

machine::machine(const program& p)
    : prog_(&p),
      out_(&std::cout),
      worker_key_(make_pred_key(intern("$worker"), 1)) {}

const machine::goal_node* machine::push_goal(term g, const goal_node* next) {
  goal_arena_.push_back(goal_node{g, next});
  return &goal_arena_.back();
}

std::vector<term> machine::collect_goals(const goal_node* from,
                                         const goal_node* base) const {
  std::vector<term> out;
  for (const goal_node* n = from; n != base; n = n->next) {
    if (n == nullptr) throw error("suspension capture crossed the delimiter");
    out.push_back(n->g);
  }
  return out;
}

delim_run machine::delimited(std::span<const term> goals) {
  run_frame r;
  r.base = goals_;
  r.cp_base = cps_.size();
  r.trail_base = store_.trail_mark();
  r.state = run_state::ready;
  for (std::size_t i = goals.size(); i-- > 0;)
    goals_ = push_goal(goals[i], goals_);
  runs_.push_back(r);
  return delim_run(this, runs_.size() - 1);
}

delim_run::~delim_run() {
  if (open_ && !done_) m_->run_close(idx_);
}

delim_outcome delim_run::next() {
  if (!open_) throw error("pull on a moved-from delimited run");
  if (done_) {
    delim_outcome o;
    o.k = delim_outcome::kind::exhausted;
    return o;
  }
  delim_outcome o = m_->run_next(idx_);
  if (o.k == delim_outcome::kind::exhausted) done_ = true;
  return o;
}

void machine::run_close(std::size_t idx) {
  if (idx >= runs_.size()) return;  // already unwound by an outer close
  while (runs_.size() > idx + 1) run_close(runs_.size() - 1);
  run_frame& r = runs_.back();
  cps_.resize(r.cp_base);
  store_.undo_to(r.trail_base);
  goals_ = r.base;
  runs_.pop_back();
  // With no run open and no goals pending, the goal arena is unreachable.
  if (runs_.empty() && goals_ == nullptr) goal_arena_.clear();
}

// Exhaustion restores the store and pops the frame: a drained run no longer
// occupies the engine, so its handle must not pull on it again.
delim_outcome machine::finish_exhausted(run_frame& r) {
  store_.undo_to(r.trail_base);
  assert(cps_.size() == r.cp_base);
  goals_ = r.base;
  runs_.pop_back();
  if (runs_.empty() && goals_ == nullptr) goal_arena_.clear();
  delim_outcome o;
  o.k = delim_outcome::kind::exhausted;
  return o;
}

void machine::push_clause_cp(term call, const goal_node* rest) {
  pred_key pk = call.indicator();
  const pred_def* pred = prog_->find(pk);
  if (pred == nullptr)
    throw existence_error("unknown predicate " + pred_indicator(pk));
  choicepoint cp;
  cp.call = call;
  cp.rest = rest;
  cp.trail = store_.trail_mark();
  cp.kind = cp_kind::clauses;
  cp.pred = pred;
  if (pred->arity == 0) {
    pred->candidates(nullptr, cp.cand);
  } else {
    term a0 = store_.deref(call.arg(0));
    token principal;
    bool indexed = true;
    switch (a0.kind()) {
      case term_kind::variable:
        indexed = false;
        break;
      case term_kind::atom:
        principal = token::make_atom(a0.symbol());
        break;
      case term_kind::integer:
        principal = token::make_number(a0.value());
        break;
      case term_kind::compound:
        principal = token::make_functor(a0.symbol(),
                                        static_cast<std::uint32_t>(a0.arity()));
        break;
    }
    pred->candidates(indexed ? &principal : nullptr, cp.cand);
  }
  cps_.push_back(std::move(cp));
}

void machine::push_answer_cp(term call, const goal_node* rest, table* tbl) {
  choicepoint cp;
  cp.call = call;
  cp.rest = rest;
  cp.trail = store_.trail_mark();
  cp.kind = cp_kind::answers;
  cp.tbl = tbl;
  cps_.push_back(std::move(cp));
}

bool machine::advance(choicepoint& cp) {
  if (cp.kind == cp_kind::clauses) {
    while (cp.next < cp.cand.size()) {
      std::uint32_t ci = cp.cand[cp.next++];
      store_.undo_to(cp.trail);
      const clause_tmpl& c = cp.pred->clauses[ci];
      std::vector<term> varmap;
      varmap.reserve(c.var_count);
      term head = store_.rebuild(c.head, varmap);
      if (!store_.unify(cp.call, head)) continue;
      const goal_node* gs = cp.rest;
      for (std::size_t gi = c.body.size(); gi-- > 0;)
        gs = push_goal(store_.rebuild(c.body[gi], varmap), gs);
      bool last = cp.next >= cp.cand.size();
      goals_ = gs;
      if (last) cps_.pop_back();
      return true;
    }
    return false;
  }
  std::size_t n = tabling_->answer_count(cp.tbl);
  while (cp.next < n) {
    std::size_t i = cp.next++;
    store_.undo_to(cp.trail);
    term inst = tabling_->answer_instance(cp.tbl, i);
    if (!store_.unify(cp.call, inst)) continue;
    bool last = cp.next >= n;
    goals_ = cp.rest;
    if (last) cps_.pop_back();
    return true;
  }
  return false;
}

bool machine::backtrack(run_frame& r) {
  while (cps_.size() > r.cp_base) {
    if (advance(cps_.back())) return true;
    cps_.pop_back();
  }
  return false;
}

delim_outcome machine::run_next(std::size_t idx) {
  if (idx + 1 != runs_.size())
    throw error("delimited runs must be pulled innermost-first");
  run_frame& r = runs_[idx];
  switch (r.state) {
    case run_state::at_answer:
    case run_state::at_shift:
      if (!backtrack(r)) return finish_exhausted(r);
      break;
    case run_state::ready:
      break;
  }

  for (;;) {
    if (goals_ == r.base) {
      r.state = run_state::at_answer;
      delim_outcome o;
      o.k = delim_outcome::kind::answer;
      return o;
    }
    ++steps_;
    if (runs_.size() > 1) ++worker_steps_;
    if (step_limit_ != 0 && steps_ > step_limit_)
      throw resource_error("derivation step limit exceeded");

    term g = store_.deref(goals_->g);
    const goal_node* rest = goals_->next;
    if (g.kind() == term_kind::variable)
      throw instantiation_error("goal is an unbound variable");
    if (g.kind() == term_kind::integer)
      throw type_error("goal is not callable: " + to_display(store_, g));
    pred_key pk = g.indicator();

    if (pk == worker_key_) {
      // Internal wrapper: resolve the call against its own clauses even
      // though the predicate is tabled.
      term w = store_.deref(g.arg(0));
      push_clause_cp(w, rest);
      if (!backtrack(r)) return finish_exhausted(r);
      continue;
    }

    auto bit = builtin_table().find(pk);
    if (bit != builtin_table().end()) {
      bool entered = false;
      switch (bit->second) {
        case builtin::b_true:
          entered = true;
          break;
        case builtin::b_fail:
          break;
        case builtin::b_unify:
          entered = store_.unify(g.arg(0), g.arg(1));
          break;
        case builtin::b_is: {
          bigint v = eval_arith(g.arg(1));
          entered = store_.unify(g.arg(0), store_.make_int(std::move(v)));
          break;
        }
        case builtin::b_lt:
          entered = eval_arith(g.arg(0)) < eval_arith(g.arg(1));
          break;
        case builtin::b_le:
          entered = eval_arith(g.arg(0)) <= eval_arith(g.arg(1));
          break;
        case builtin::b_gt:
          entered = eval_arith(g.arg(0)) > eval_arith(g.arg(1));
          break;
        case builtin::b_ge:
          entered = eval_arith(g.arg(0)) >= eval_arith(g.arg(1));
          break;
        case builtin::b_aeq:
          entered = eval_arith(g.arg(0)) == eval_arith(g.arg(1));
          break;
        case builtin::b_ane:
          entered = eval_arith(g.arg(0)) != eval_arith(g.arg(1));
          break;
        case builtin::b_writeln: {
          term_writer w(store_, {.quoted = false});
          w.write(*out_, g.arg(0));
          *out_ << '\n';
          out_->flush();
          entered = true;
          break;
        }
        case builtin::b_shift: {
          delim_outcome o;
          o.k = delim_outcome::kind::shifted;
          o.payload = g.arg(0);
          o.susp.goals = collect_goals(rest, r.base);
          goals_ = r.base;
          r.state = run_state::at_shift;
          return o;
        }
        case builtin::b_abolish:
          if (tabling_ != nullptr) tabling_->abolish_all();
          entered = true;
          break;
      }
      if (entered) {
        goals_ = rest;
        continue;
      }
      if (!backtrack(r)) return finish_exhausted(r);
      continue;
    }

    if (tabling_ != nullptr && prog_->tabled(pk)) {
      auto act = tabling_->on_tabled_call(g);
      if (act.k == tabled_call_handler::action::kind::suspend) {
        delim_outcome o;
        o.k = delim_outcome::kind::shifted;
        o.payload = g;
        o.source = act.tbl;
        o.susp.goals = collect_goals(rest, r.base);
        goals_ = r.base;
        r.state = run_state::at_shift;
        return o;
      }
      push_answer_cp(g, rest, act.tbl);
      if (!backtrack(r)) return finish_exhausted(r);
      continue;
    }

    push_clause_cp(g, rest);
    if (!backtrack(r)) return finish_exhausted(r);
  }
}

bigint machine::eval_arith(term t) {
  t = store_.deref(t);
  static const symbol_id plus = intern("+");
  static const symbol_id minus = intern("-");
  static const symbol_id times = intern("*");
  switch (t.kind()) {
    case term_kind::integer:
      return t.value();
    case term_kind::variable:
      throw instantiation_error("unbound variable in arithmetic");
    case term_kind::compound: {
      symbol_id s = t.symbol();
      if (t.arity() == 2) {
        if (s == plus) return eval_arith(t.arg(0)) + eval_arith(t.arg(1));
        if (s == minus) return eval_arith(t.arg(0)) - eval_arith(t.arg(1));
        if (s == times) return eval_arith(t.arg(0)) * eval_arith(t.arg(1));
      } else if (t.arity() == 1 && s == minus) {
        return -eval_arith(t.arg(0));
      }
      break;
    }
    case term_kind::atom:
      break;
  }
  throw type_error("not an arithmetic expression: " + to_display(store_, t));
}

}  // namespace tabulog
