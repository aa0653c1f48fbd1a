#include "tabulog/tabling.hpp"

namespace tabulog {

tabled_call_handler::action tabler::on_tabled_call(term wrapper) {
  table* t = table_for(wrapper);
  if (t->status() == table_status::complete)
    return {action::kind::enumerate, t};
  if (!component_active_) {
    run_leader(wrapper, t);
    return {action::kind::enumerate, t};
  }
  if (t->status() == table_status::fresh) activate(wrapper, t);
  ++stats_.suspensions;
  return {action::kind::suspend, t};
}

term tabler::answer_instance(table* t, std::size_t i) {
  return m_.store().rebuild(t->answer_key(i));
}

void tabler::abolish_all() {
  if (component_active_)
    throw error("abolish_all_tables during an active tabled evaluation");
  calls_.clear();
  tables_.clear();
  gwl_.clear();
}

std::vector<const table*> tabler::tables() const {
  std::vector<const table*> out;
  out.reserve(tables_.size());
  for (const auto& t : tables_) out.push_back(t.get());
  return out;
}

const table* tabler::find_table(const variant_key& k) const {
  const auto* leaf = calls_.lookup(k);
  return leaf == nullptr ? nullptr : leaf->payload;
}

table* tabler::table_for(term wrapper) {
  variant_key k = m_.store().key_of(wrapper);
  auto [leaf, was_new] = calls_.insert(k);
  if (was_new) {
    tables_.push_back(std::make_unique<table>(std::move(k)));
    leaf->payload = tables_.back().get();
    ++stats_.tables_created;
  }
  return leaf->payload;
}

void tabler::run_leader(term wrapper, table* t) {
  component_active_ = true;
  try {
    activate(wrapper, t);
    completion();
  } catch (...) {
    // Drop everything the aborted evaluation computed; the tables stay
    // usable and a later call starts over.
    for (table* tbl : component_) tbl->reset_to_fresh();
    component_.clear();
    gwl_.clear();
    component_active_ = false;
    throw;
  }
  for (table* tbl : component_) tbl->to_complete();
  component_.clear();
  component_active_ = false;
}

void tabler::activate(term wrapper, table* t) {
  t->to_active();
  component_.push_back(t);
  ++stats_.worker_invocations;
  term worker = m_.store().make_compound(worker_sym_, {wrapper});
  drive(wrapper, std::span<const term>(&worker, 1), t);
}

void tabler::drive(term wrapper, std::span<const term> goals, table* t) {
  delim_run run = m_.delimited(goals);
  for (;;) {
    delim_outcome o = run.next();
    if (o.k == delim_outcome::kind::exhausted) return;
    if (o.k == delim_outcome::kind::answer) {
      store_answer(t, wrapper);
      continue;
    }
    if (o.source == nullptr)
      throw error("shift/1 outside any reset during tabled evaluation");
    // Snapshot the suspended call, its continuation, and the consuming
    // wrapper in one renaming, before backtracking clears their bindings.
    term_store::copier cp(m_.store());
    dependency d;
    d.source_wrapper = cp.copy(o.payload);
    d.cont_goals.reserve(o.susp.goals.size());
    for (term g : o.susp.goals) d.cont_goals.push_back(cp.copy(g));
    d.target_wrapper = cp.copy(wrapper);
    d.target = t;
    store_dependency(o.source, std::move(d));
  }
}

void tabler::store_answer(table* t, term wrapper) {
  assert(t->status() == table_status::active);
  variant_key k = m_.store().key_of(wrapper);
  auto [leaf, was_new] = t->answers_.insert(k);
  if (!was_new) return;
  leaf->payload = static_cast<std::uint32_t>(t->answers_.size() - 1);
  ++stats_.answers_stored;
  t->wl_.add_answer(m_.store().copy(wrapper));
  schedule(t);
}

void tabler::store_dependency(table* src, dependency d) {
  assert(src->status() == table_status::active);
  src->deps_.push_back(std::move(d));
  src->wl_.add_dependency(static_cast<std::uint32_t>(src->deps_.size() - 1));
  ++stats_.dependencies_stored;
  schedule(src);
}

void tabler::schedule(table* t) { gwl_.push(t); }

void tabler::completion() {
  while (auto t = gwl_.pop()) completion_step(*t);
}

void tabler::completion_step(table* t) {
  while (auto work = t->wl_.get_work()) {
    const auto& [answers, dep_ids] = *work;
    for (term a : answers) {
      for (std::uint32_t id : dep_ids) {
        const dependency& d = t->deps_[id];
        ++stats_.resumptions;
        std::size_t mark = m_.store().trail_mark();
        // Fresh copies per resumption, in one shared renaming so the
        // continuation still sees the wrappers' variables.
        term_store::copier cp(m_.store());
        term src_w = cp.copy(d.source_wrapper);
        std::vector<term> goals;
        goals.reserve(d.cont_goals.size());
        for (term g : d.cont_goals) goals.push_back(cp.copy(g));
        term tgt_w = cp.copy(d.target_wrapper);
        table* target = d.target;
        term ans = m_.store().copy(a);
        if (m_.store().unify(src_w, ans)) drive(tgt_w, goals, target);
        m_.store().undo_to(mark);
      }
    }
  }
}

}  // namespace tabulog
