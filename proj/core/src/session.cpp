#include "tabulog/session.hpp"

namespace tabulog {

std::string solution::to_string() const {
  if (bindings.empty()) return "true";
  std::string out;
  for (std::size_t i = 0; i < bindings.size(); ++i) {
    if (i > 0) out += ", ";
    out += bindings[i].name + " = " + bindings[i].value;
  }
  return out;
}

solution_stream::solution_stream(term_store& st, delim_run run, query q)
    : st_(&st), q_(std::move(q)), run_(std::move(run)) {}

bool solution_stream::next() {
  delim_outcome o = run_.next();
  switch (o.k) {
    case delim_outcome::kind::answer: {
      cur_.bindings.clear();
      // One writer per solution: unbound variables number from _G0 afresh.
      term_writer w(*st_);
      for (const auto& [name, v] : q_.vars)
        cur_.bindings.push_back({name, w.str(v)});
      return true;
    }
    case delim_outcome::kind::shifted:
      throw error("shift/1 without an enclosing reset");
    case delim_outcome::kind::exhausted:
      return false;
  }
  return false;
}

session::session(program p, std::ostream& out) : out_(&out) {
  load(std::move(p));
}

void session::load(program p) {
  prog_ = std::make_unique<program>(std::move(p));
  prog_->finalize();
  tab_.reset();
  m_ = std::make_unique<machine>(*prog_);
  m_->set_output(*out_);
  tab_ = std::make_unique<tabler>(*m_);
}

solution_stream session::query(std::string_view text) {
  if (m_->run_depth() != 0)
    throw error("a query is already in progress on this session");
  struct query q = parse_query(text, m_->store());
  auto goals = q.goals;
  return solution_stream(m_->store(), m_->solve(goals), std::move(q));
}

std::vector<solution> session::all(std::string_view text, std::size_t limit) {
  std::vector<solution> out;
  auto s = query(text);
  while (s.next()) {
    out.push_back(s.current());
    if (limit != 0 && out.size() >= limit) break;
  }
  return out;
}

engine_stats session::stats() const {
  const tabling_stats& ts = tab_->stats();
  engine_stats es;
  es.tables = ts.tables_created;
  es.answers = ts.answers_stored;
  es.dependencies = ts.dependencies_stored;
  es.suspensions = ts.suspensions;
  es.resumptions = ts.resumptions;
  es.worker_invocations = ts.worker_invocations;
  es.steps = m_->steps();
  es.worker_steps = m_->worker_steps();
  return es;
}

void session::abolish_all_tables() { tab_->abolish_all(); }

std::vector<table_info> session::table_snapshot() {
  std::vector<table_info> out;
  for (const table* t : tab_->tables()) {
    table_info info;
    info.pattern = term_writer(m_->store()).str(m_->store().rebuild(t->key()));
    info.status = t->status();
    for (const auto& ak : t->answer_keys())
      info.answers.push_back(
          term_writer(m_->store()).str(m_->store().rebuild(ak)));
    info.pending_dependencies = t->dependency_count();
    out.push_back(std::move(info));
  }
  return out;
}

}  // namespace tabulog
