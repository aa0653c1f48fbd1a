#pragma once

// Shared test support: a reference SLD interpreter with its own term
// representation (so engine bugs cannot leak into the expected values), a
// bitset transitive-closure oracle, and seeded random generators for terms,
// digraphs and stratified programs.

#include <array>
#include <bitset>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tabulog/engine.hpp"
#include "tabulog/parser.hpp"
#include "tabulog/program.hpp"
#include "tabulog/session.hpp"
#include "tabulog/tabling.hpp"
#include "tabulog/term.hpp"

namespace tsup {

// One solution as the concatenated canonical token runs of the query
// variables, numbered by first occurrence across the whole tuple. Two
// solutions are equal exactly when they are variants of each other.
using tuple_key = std::vector<tabulog::token>;

inline std::string tuple_to_string(const tuple_key& tk) {
  std::string out;
  for (const auto& t : tk) {
    if (!out.empty()) out += ' ';
    switch (t.k) {
      case tabulog::token::tkind::var:
        out += "_" + std::to_string(t.idx);
        break;
      case tabulog::token::tkind::atom:
        out += tabulog::symbol_name(t.sym);
        break;
      case tabulog::token::tkind::number:
        out += t.num.str();
        break;
      case tabulog::token::tkind::functor:
        out += tabulog::symbol_name(t.sym) + "/" + std::to_string(t.idx);
        break;
    }
  }
  return out;
}

inline std::string tuples_to_string(const std::vector<tuple_key>& ts) {
  std::string out;
  for (const auto& t : ts) {
    out += "  [";
    out += tuple_to_string(t);
    out += "]\n";
  }
  return out;
}

// Runs a query on a fresh machine (with tabling attached) and returns one
// tuple_key per answer, in answer order.
inline std::vector<tuple_key> engine_solutions(const tabulog::program& p,
                                               std::string_view query_text,
                                               std::size_t limit = 0) {
  namespace tb = tabulog;
  tb::machine m(p);
  tb::tabler tab(m);
  std::ostringstream sink;
  m.set_output(sink);
  tb::query q = tb::parse_query(query_text, m.store());
  std::vector<tb::term> goals = q.goals;
  tb::delim_run run = m.solve(goals);
  std::vector<tuple_key> out;
  while (true) {
    tb::delim_outcome o = run.next();
    if (o.k == tb::delim_outcome::kind::answer) {
      tuple_key tk;
      std::unordered_map<std::uint32_t, std::uint32_t> vi;
      for (const auto& [name, t] : q.vars) m.store().append_key(t, tk, vi);
      out.push_back(std::move(tk));
      if (limit != 0 && out.size() == limit) break;
      continue;
    }
    if (o.k == tb::delim_outcome::kind::shifted)
      throw tb::error("shift escaped the query");
    break;
  }
  return out;
}

// Textbook SLD resolution over the parsed clause templates, with its own
// term nodes, unification and arithmetic. No indexing, no tabling, no
// dedup: answers come out in depth-first clause order with duplicates.
class sld_oracle {
 public:
  explicit sld_oracle(const tabulog::program& p,
                      std::uint64_t step_cap = 8'000'000)
      : prog_(&p), cap_(step_cap) {
    s_true_ = tabulog::intern("true");
    s_fail_ = tabulog::intern("fail");
    s_eq_ = tabulog::intern("=");
    s_is_ = tabulog::intern("is");
    s_lt_ = tabulog::intern("<");
    s_le_ = tabulog::intern("=<");
    s_gt_ = tabulog::intern(">");
    s_ge_ = tabulog::intern(">=");
    s_aeq_ = tabulog::intern("=:=");
    s_ane_ = tabulog::intern("=\\=");
    s_writeln_ = tabulog::intern("writeln");
    s_plus_ = tabulog::intern("+");
    s_minus_ = tabulog::intern("-");
    s_times_ = tabulog::intern("*");
  }

  std::vector<tuple_key> run(std::string_view query_text) {
    results_.clear();
    arena_.clear();
    trail_.clear();
    qvars_.clear();
    steps_ = 0;

    tabulog::term_store qst;
    tabulog::query q = tabulog::parse_query(query_text, qst);
    std::unordered_map<std::uint32_t, std::uint32_t> vi;
    std::vector<std::vector<tabulog::token>> goal_toks;
    for (tabulog::term g : q.goals) {
      std::vector<tabulog::token> run;
      qst.append_key(g, run, vi);
      goal_toks.push_back(std::move(run));
    }
    std::vector<node*> slots(vi.size(), nullptr);
    std::vector<node*> goals;
    for (auto it = goal_toks.rbegin(); it != goal_toks.rend(); ++it) {
      std::size_t pos = 0;
      goals.push_back(build(*it, pos, slots));
    }
    for (const auto& [name, t] : q.vars) qvars_.push_back(slots[vi.at(t.var_id())]);
    step(goals);
    return std::move(results_);
  }

 private:
  struct node {
    int kind = 0;  // 0 var, 1 atom, 2 int, 3 compound
    tabulog::symbol_id sym = 0;
    tabulog::bigint num;
    std::vector<node*> args;
    node* ref = nullptr;
  };

  node* mk() {
    arena_.emplace_back();
    return &arena_.back();
  }
  node* mkvar() { return mk(); }
  node* mkatom(tabulog::symbol_id s) {
    node* n = mk();
    n->kind = 1;
    n->sym = s;
    return n;
  }
  node* mkint(tabulog::bigint v) {
    node* n = mk();
    n->kind = 2;
    n->num = std::move(v);
    return n;
  }

  node* deref(node* t) const {
    while (t->kind == 0 && t->ref != nullptr) t = t->ref;
    return t;
  }

  bool unify(node* a, node* b) {
    a = deref(a);
    b = deref(b);
    if (a == b) return true;
    if (a->kind == 0) {
      a->ref = b;
      trail_.push_back(a);
      return true;
    }
    if (b->kind == 0) {
      b->ref = a;
      trail_.push_back(b);
      return true;
    }
    if (a->kind != b->kind) return false;
    if (a->kind == 1) return a->sym == b->sym;
    if (a->kind == 2) return a->num == b->num;
    if (a->sym != b->sym || a->args.size() != b->args.size()) return false;
    for (std::size_t i = 0; i < a->args.size(); ++i)
      if (!unify(a->args[i], b->args[i])) return false;
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      trail_.back()->ref = nullptr;
      trail_.pop_back();
    }
  }

  node* build(std::span<const tabulog::token> toks, std::size_t& pos,
              std::vector<node*>& slots) {
    const tabulog::token& tok = toks[pos++];
    switch (tok.k) {
      case tabulog::token::tkind::var:
        if (slots[tok.idx] == nullptr) slots[tok.idx] = mkvar();
        return slots[tok.idx];
      case tabulog::token::tkind::atom:
        return mkatom(tok.sym);
      case tabulog::token::tkind::number:
        return mkint(tok.num);
      case tabulog::token::tkind::functor: {
        node* n = mk();
        n->kind = 3;
        n->sym = tok.sym;
        n->args.resize(tok.idx);
        for (std::uint32_t i = 0; i < tok.idx; ++i)
          n->args[i] = build(toks, pos, slots);
        return n;
      }
    }
    return nullptr;
  }

  tabulog::bigint eval(node* t) {
    t = deref(t);
    if (t->kind == 2) return t->num;
    if (t->kind == 0)
      throw tabulog::instantiation_error("oracle: unbound arithmetic argument");
    if (t->kind == 3) {
      if (t->args.size() == 2) {
        if (t->sym == s_plus_) return eval(t->args[0]) + eval(t->args[1]);
        if (t->sym == s_minus_) return eval(t->args[0]) - eval(t->args[1]);
        if (t->sym == s_times_) return eval(t->args[0]) * eval(t->args[1]);
      }
      if (t->args.size() == 1 && t->sym == s_minus_) return -eval(t->args[0]);
    }
    throw tabulog::type_error("oracle: non-evaluable arithmetic term");
  }

  void record() {
    tuple_key tk;
    std::unordered_map<const node*, std::uint32_t> vm;
    for (node* v : qvars_) append_node_key(v, tk, vm);
    results_.push_back(std::move(tk));
  }

  void append_node_key(node* t, tuple_key& out,
                       std::unordered_map<const node*, std::uint32_t>& vm) {
    t = deref(t);
    switch (t->kind) {
      case 0: {
        auto [it, fresh] = vm.try_emplace(t, static_cast<std::uint32_t>(vm.size()));
        out.push_back(tabulog::token::make_var(it->second));
        break;
      }
      case 1:
        out.push_back(tabulog::token::make_atom(t->sym));
        break;
      case 2:
        out.push_back(tabulog::token::make_number(t->num));
        break;
      default:
        out.push_back(tabulog::token::make_functor(
            t->sym, static_cast<std::uint32_t>(t->args.size())));
        for (node* a : t->args) append_node_key(a, out, vm);
        break;
    }
  }

  // goals is a stack: back() runs first. Restores it before returning.
  void step(std::vector<node*>& goals) {
    if (goals.empty()) {
      record();
      return;
    }
    if (++steps_ > cap_)
      throw tabulog::resource_error("oracle: step cap exceeded");
    node* orig = goals.back();
    goals.pop_back();
    dispatch(deref(orig), goals);
    goals.push_back(orig);
  }

  void dispatch(node* g, std::vector<node*>& goals) {
    tabulog::symbol_id s = 0;
    std::size_t ar = 0;
    if (g->kind == 1) {
      s = g->sym;
    } else if (g->kind == 3) {
      s = g->sym;
      ar = g->args.size();
    } else {
      throw tabulog::type_error("oracle: goal is not callable");
    }
    if (ar == 0 && s == s_true_) {
      step(goals);
      return;
    }
    if (ar == 0 && s == s_fail_) return;
    if (ar == 2 && s == s_eq_) {
      std::size_t m = trail_.size();
      if (unify(g->args[0], g->args[1])) step(goals);
      undo(m);
      return;
    }
    if (ar == 2 && s == s_is_) {
      node* v = mkint(eval(g->args[1]));
      std::size_t m = trail_.size();
      if (unify(g->args[0], v)) step(goals);
      undo(m);
      return;
    }
    if (ar == 2 && (s == s_lt_ || s == s_le_ || s == s_gt_ || s == s_ge_ ||
                    s == s_aeq_ || s == s_ane_)) {
      tabulog::bigint x = eval(g->args[0]);
      tabulog::bigint y = eval(g->args[1]);
      bool ok = s == s_lt_   ? x < y
                : s == s_le_ ? x <= y
                : s == s_gt_ ? x > y
                : s == s_ge_ ? x >= y
                : s == s_aeq_ ? x == y
                              : x != y;
      if (ok) step(goals);
      return;
    }
    if (ar == 1 && s == s_writeln_) {
      step(goals);
      return;
    }
    const tabulog::pred_def* def = prog_->find(tabulog::make_pred_key(
        s, static_cast<std::uint32_t>(ar)));
    if (def == nullptr)
      throw tabulog::existence_error(
          "oracle: unknown predicate " +
          tabulog::pred_indicator(tabulog::make_pred_key(
              s, static_cast<std::uint32_t>(ar))));
    for (const tabulog::clause_tmpl& cl : def->clauses) {
      std::vector<node*> slots(cl.var_count, nullptr);
      std::size_t pos = 0;
      node* head = build(cl.head, pos, slots);
      std::size_t m = trail_.size();
      if (unify(g, head)) {
        std::size_t pushed = 0;
        for (auto it = cl.body.rbegin(); it != cl.body.rend(); ++it) {
          std::size_t bp = 0;
          goals.push_back(build(*it, bp, slots));
          ++pushed;
        }
        step(goals);
        goals.resize(goals.size() - pushed);
      }
      undo(m);
    }
  }

  const tabulog::program* prog_;
  std::uint64_t cap_;
  std::uint64_t steps_ = 0;
  std::deque<node> arena_;
  std::vector<node*> trail_;
  std::vector<node*> qvars_;
  std::vector<tuple_key> results_;

  tabulog::symbol_id s_true_, s_fail_, s_eq_, s_is_, s_lt_, s_le_, s_gt_,
      s_ge_, s_aeq_, s_ane_, s_writeln_, s_plus_, s_minus_, s_times_;
};

// ---- digraphs and transitive closure ----

struct digraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
};

inline digraph random_digraph(std::mt19937& rng) {
  digraph g;
  g.n = 1 + static_cast<int>(rng() % 8);
  int m = static_cast<int>(rng() % 21);
  std::set<std::pair<int, int>> es;
  for (int i = 0; i < m; ++i)
    es.insert({static_cast<int>(rng() % g.n), static_cast<int>(rng() % g.n)});
  g.edges.assign(es.begin(), es.end());
  return g;
}

// Transitive (not reflexive) closure as reachability bitsets.
inline std::array<std::bitset<8>, 8> closure_of(const digraph& g) {
  std::array<std::bitset<8>, 8> r{};
  for (auto [a, b] : g.edges) r[a].set(b);
  for (int k = 0; k < g.n; ++k)
    for (int i = 0; i < g.n; ++i)
      if (r[i].test(k)) r[i] |= r[k];
  return r;
}

inline std::set<std::pair<int, int>> closure_pairs(const digraph& g) {
  auto r = closure_of(g);
  std::set<std::pair<int, int>> out;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      if (r[i].test(j)) out.insert({i, j});
  return out;
}

struct closure_shape {
  bool double_rec = false;
  bool rec_clause_first = true;
  bool rec_goal_first = true;  // false: edge goal before the recursive goal
};

inline std::string closure_program(const digraph& g,
                                   const closure_shape& s = {}) {
  std::string out = ":- table p/2.\n";
  std::string rec = s.double_rec      ? "p(X, Y) :- p(X, Z), p(Z, Y).\n"
                    : s.rec_goal_first ? "p(X, Y) :- p(X, Z), e(Z, Y).\n"
                                       : "p(X, Y) :- e(X, Z), p(Z, Y).\n";
  std::string base = "p(X, Y) :- e(X, Y).\n";
  out += s.rec_clause_first ? rec + base : base + rec;
  // Keeps e/2 defined even for an edgeless graph.
  out += "e(void, void) :- fail.\n";
  for (auto [a, b] : g.edges)
    out += "e(n" + std::to_string(a) + ", n" + std::to_string(b) + ").\n";
  return out;
}

// Decodes an "nK" atom token back to its node index; -1 for anything else.
inline int node_index(const tabulog::token& t) {
  if (t.k != tabulog::token::tkind::atom) return -1;
  const std::string& s = tabulog::symbol_name(t.sym);
  if (s.size() < 2 || s[0] != 'n') return -1;
  return std::stoi(s.substr(1));
}

// Turns closure answers (tuples of one or two node atoms) into int pairs;
// single-var tuples use `fixed` as the first component.
inline std::set<std::pair<int, int>> pair_set(const std::vector<tuple_key>& sols,
                                              int fixed = -1) {
  std::set<std::pair<int, int>> out;
  for (const auto& tk : sols) {
    if (tk.size() == 2)
      out.insert({node_index(tk[0]), node_index(tk[1])});
    else if (tk.size() == 1)
      out.insert({fixed, node_index(tk[0])});
  }
  return out;
}

// ---- random generators ----

inline tabulog::term random_term(tabulog::term_store& st, std::mt19937& rng,
                                 int depth,
                                 std::vector<tabulog::term>& var_pool) {
  unsigned pick = rng() % 100;
  if (depth == 0 || pick < 45) {
    unsigned leaf = rng() % 10;
    if (leaf < 3) {
      if (!var_pool.empty() && rng() % 2 == 0)
        return var_pool[rng() % var_pool.size()];
      var_pool.push_back(st.fresh_var());
      return var_pool.back();
    }
    if (leaf < 7) {
      static const char* names[] = {"a", "b", "c", "foo", "Bar atom", "[]"};
      return st.make_atom(names[rng() % 6]);
    }
    if (leaf < 9)
      return st.make_int(tabulog::bigint(static_cast<int>(rng() % 2001) - 1000));
    return st.make_int((tabulog::bigint(1) << 90) +
                       static_cast<int>(rng() % 7));
  }
  static const char* fs[] = {"f", "g", "h", "pair"};
  std::size_t ar = 1 + rng() % 3;
  std::vector<tabulog::term> args;
  args.reserve(ar);
  for (std::size_t i = 0; i < ar; ++i)
    args.push_back(random_term(st, rng, depth - 1, var_pool));
  return st.make_compound(fs[rng() % 4], std::move(args));
}

// A random stratified program (call graph strictly layered, so plain SLD
// terminates) plus queries against its top predicate.
struct gen_prog {
  std::string text;
  std::vector<std::string> queries;
};

inline gen_prog random_program(std::mt19937& rng) {
  static const char* consts[] = {"a", "b", "c", "d"};
  auto c = [&] { return consts[rng() % 4]; };
  gen_prog gp;
  std::vector<std::string> lower;
  int nfact_preds = 1 + static_cast<int>(rng() % 2);
  for (int i = 0; i < nfact_preds; ++i) {
    std::string p = "q" + std::to_string(i);
    int nf = 2 + static_cast<int>(rng() % 5);
    for (int f = 0; f < nf; ++f)
      gp.text += p + "(" + c() + ", " + c() + ").\n";
    lower.push_back(p);
  }
  int nlayers = 1 + static_cast<int>(rng() % 2);
  for (int l = 0; l < nlayers; ++l) {
    std::string p = "r" + std::to_string(l);
    int nclauses = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < nclauses; ++k) {
      int ngoals = 1 + static_cast<int>(rng() % 3);
      std::string body;
      for (int gi = 0; gi < ngoals; ++gi) {
        const std::string& callee = lower[rng() % lower.size()];
        std::string a0 = "X" + std::to_string(gi);
        std::string a1 = "X" + std::to_string(gi + 1);
        if (rng() % 5 == 0) a1 = c();
        if (gi != 0) body += ", ";
        body += callee + "(" + a0 + ", " + a1 + ")";
      }
      std::string head_last = "X" + std::to_string(ngoals);
      if (rng() % 6 == 0) head_last = "Free";
      gp.text += p + "(X0, " + head_last + ") :- " + body + ".\n";
    }
    lower.push_back(p);
  }
  const std::string& top = lower.back();
  gp.queries.push_back(top + "(X, Y).");
  gp.queries.push_back(top + "(" + std::string(c()) + ", Y).");
  gp.queries.push_back(top + "(X, X).");
  return gp;
}

// ---- session conveniences ----

inline std::vector<std::string> all_strings(tabulog::session& s,
                                            std::string_view q,
                                            std::size_t limit = 0) {
  std::vector<std::string> out;
  for (const auto& sol : s.all(q, limit)) out.push_back(sol.to_string());
  return out;
}

inline std::set<std::string> string_set(tabulog::session& s,
                                        std::string_view q) {
  auto v = all_strings(s, q);
  return {v.begin(), v.end()};
}

}  // namespace tsup
